#pragma once

// Planning: turns detections and situations into adaptation directives over
// an abstract UI model constrained by a context model.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "icode/analyzers.hpp"
#include "icode/situations.hpp"

namespace icode {

/// Declared assumptions about the deployment screen and user.
struct ContextModel {
  int screen_width = 260;
  int screen_height = 520;  // must exceed 260
  int scale_initial_length = 200;
  int scale_growth_step = 20;
  int scale_margin = 0;
  int vertical_length = 260;  // length given to a widget flipped to vertical
  std::vector<std::string> user_profile;

  void validate() const;
  friend bool operator==(const ContextModel&, const ContextModel&) = default;
};

enum class Orientation { Horizontal, Vertical };
std::string_view to_string(Orientation o);

struct WidgetState {
  std::string id;
  Orientation orientation = Orientation::Horizontal;
  int length = 0;
  std::int64_t usage_count = 0;
  std::int64_t last_used = 0;
  bool visible = true;
  friend bool operator==(const WidgetState&, const WidgetState&) = default;
};

struct UIModel {
  std::vector<WidgetState> widgets;
  std::optional<std::string> paged_to;

  /// The demonstrator form: name entry, age scale, two buttons, output log.
  static UIModel demo(const ContextModel& ctx);

  const WidgetState* find(std::string_view id) const;
  WidgetState* find(std::string_view id);
  /// Orientation bounds and paging visibility hold.
  bool invariants_hold(const ContextModel& ctx) const;

  friend bool operator==(const UIModel&, const UIModel&) = default;
};

inline constexpr std::string_view kNameEntry = "name_entry";
inline constexpr std::string_view kAgeScale = "age_scale";
inline constexpr std::string_view kPushButton = "push_button";
inline constexpr std::string_view kFinishedButton = "finished_button";
inline constexpr std::string_view kOutputArea = "output_area";

/// Widget of the demo form an event is attributed to.
std::string_view widget_for(const Event& e);

namespace directive {

struct Resize {
  std::string widget;
  int new_length = 0;
  friend bool operator==(const Resize&, const Resize&) = default;
};
struct Reorient {
  std::string widget;
  Orientation new_orientation = Orientation::Vertical;
  int new_length = 0;
  friend bool operator==(const Reorient&, const Reorient&) = default;
};
struct Lock {
  SituationId reason = SituationId::S1_UserChanged;
  friend bool operator==(const Lock&, const Lock&) = default;
};
struct Unlock {
  friend bool operator==(const Unlock&, const Unlock&) = default;
};
enum class AlertLevel { Warning, Critical };
struct Alert {
  AlertLevel level = AlertLevel::Warning;
  std::string message;
  friend bool operator==(const Alert&, const Alert&) = default;
};
struct Page {
  std::string winner;
  friend bool operator==(const Page&, const Page&) = default;
};
struct Restore {
  friend bool operator==(const Restore&, const Restore&) = default;
};
struct Hide {
  std::string widget;
  friend bool operator==(const Hide&, const Hide&) = default;
};
struct Challenge {
  std::string kind = "captcha";
  friend bool operator==(const Challenge&, const Challenge&) = default;
};

}  // namespace directive

using AdaptationDirective =
    std::variant<directive::Resize, directive::Reorient, directive::Lock, directive::Unlock, directive::Alert,
                 directive::Page, directive::Restore, directive::Hide, directive::Challenge>;

std::string_view to_string(directive::AlertLevel level);

/// Short lowercase name: resize, reorient, lock, unlock, alert, page, restore,
/// hide, challenge.
std::string_view directive_name(const AdaptationDirective& d);

/// "name key=value ..." with keys in a fixed order; alerts render as
/// "alert level=<level> message=<text>".
std::string describe(const AdaptationDirective& d);

enum class PagingPolicy { None, WinnerTakesAll, LfuEvict };
std::string_view to_string(PagingPolicy p);
std::optional<PagingPolicy> paging_policy_from_string(std::string_view text);

enum class SafeDefault { None, Lock };
std::string_view to_string(SafeDefault s);
std::optional<SafeDefault> safe_default_from_string(std::string_view text);

/// Grow a horizontal widget by one step while it fits; flip it to vertical
/// once it would not; a vertical widget saturates. Non-KO bursts plan nothing.
std::optional<AdaptationDirective> plan_scale(const WidgetState& widget, const Detection& burst,
                                              const ContextModel& ctx);
/// Same, looking the widget up by id. Throws UnknownWidget.
std::optional<AdaptationDirective> plan_scale(const UIModel& ui, std::string_view widget_id, const Detection& burst,
                                              const ContextModel& ctx);

std::vector<AdaptationDirective> plan_situation(const Situation& s, SafeDefault safe_default = SafeDefault::None);

/// Winner-takes-all pages to the most used widget (ties: most recent use,
/// then list order). LFU eviction hides the least used visible widget while
/// the visible widgets' total length exceeds the screen height.
std::optional<AdaptationDirective> plan_paging(const UIModel& ui, PagingPolicy policy, const ContextModel& ctx);

/// Throws NotPaged when nothing is paged.
AdaptationDirective restore(const UIModel& ui);

/// Applies geometry/visibility directives; the others leave the model as is.
/// Throws UnknownWidget for directives naming a missing widget.
UIModel apply_directive(const UIModel& ui, const AdaptationDirective& d);

}  // namespace icode

#include "icode/planner.hpp"

#include <algorithm>
#include <numeric>

#include "icode/error.hpp"

namespace icode {

void ContextModel::validate() const {
  if (screen_width < 1) throw Error(ErrorCode::InvalidConfig, "screen_width must be >= 1");
  if (screen_height <= 260) throw Error(ErrorCode::InvalidConfig, "screen_height must exceed 260");
  if (scale_growth_step < 1) throw Error(ErrorCode::InvalidConfig, "scale_growth_step must be >= 1");
  if (scale_margin < 0) throw Error(ErrorCode::InvalidConfig, "scale_margin must be >= 0");
  if (scale_initial_length < 1 || scale_initial_length > screen_width) {
    throw Error(ErrorCode::InvalidConfig, "scale_initial_length must lie in [1, screen_width]");
  }
  if (vertical_length < 1) throw Error(ErrorCode::InvalidConfig, "vertical_length must be >= 1");
}

std::string_view to_string(Orientation o) { return o == Orientation::Horizontal ? "horizontal" : "vertical"; }

UIModel UIModel::demo(const ContextModel& ctx) {
  UIModel ui;
  ui.widgets = {
      {std::string(kNameEntry), Orientation::Horizontal, 160, 0, 0, true},
      {std::string(kAgeScale), Orientation::Horizontal, ctx.scale_initial_length, 0, 0, true},
      {std::string(kPushButton), Orientation::Horizontal, 50, 0, 0, true},
      {std::string(kFinishedButton), Orientation::Horizontal, 50, 0, 0, true},
      {std::string(kOutputArea), Orientation::Horizontal, 40, 0, 0, true},
  };
  return ui;
}

const WidgetState* UIModel::find(std::string_view id) const {
  auto it = std::find_if(widgets.begin(), widgets.end(), [&](const WidgetState& w) { return w.id == id; });
  return it == widgets.end() ? nullptr : &*it;
}

WidgetState* UIModel::find(std::string_view id) {
  auto it = std::find_if(widgets.begin(), widgets.end(), [&](const WidgetState& w) { return w.id == id; });
  return it == widgets.end() ? nullptr : &*it;
}

bool UIModel::invariants_hold(const ContextModel& ctx) const {
  for (const WidgetState& w : widgets) {
    const int bound = w.orientation == Orientation::Horizontal ? ctx.screen_width : ctx.screen_height;
    if (w.length > bound || w.length < 0 || w.usage_count < 0) return false;
  }
  if (paged_to) {
    for (const WidgetState& w : widgets) {
      if (w.visible != (w.id == *paged_to)) return false;
    }
    if (find(*paged_to) == nullptr) return false;
  }
  return true;
}

std::string_view widget_for(const Event& e) {
  switch (e.kind) {
    case EventKind::EntryInsert:
    case EventKind::EntryDelete:
    case EventKind::EntryFocus:
      return kNameEntry;
    case EventKind::ButtonPressed:
      return kPushButton;
    case EventKind::ButtonExit:
      return kFinishedButton;
    case EventKind::Scale:
      return kAgeScale;
    case EventKind::YScroll:
      return kOutputArea;
    case EventKind::Error:
      break;
  }
  return {};
}

std::string_view to_string(directive::AlertLevel level) {
  return level == directive::AlertLevel::Warning ? "warning" : "critical";
}

std::string_view directive_name(const AdaptationDirective& d) {
  struct Namer {
    std::string_view operator()(const directive::Resize&) const { return "resize"; }
    std::string_view operator()(const directive::Reorient&) const { return "reorient"; }
    std::string_view operator()(const directive::Lock&) const { return "lock"; }
    std::string_view operator()(const directive::Unlock&) const { return "unlock"; }
    std::string_view operator()(const directive::Alert&) const { return "alert"; }
    std::string_view operator()(const directive::Page&) const { return "page"; }
    std::string_view operator()(const directive::Restore&) const { return "restore"; }
    std::string_view operator()(const directive::Hide&) const { return "hide"; }
    std::string_view operator()(const directive::Challenge&) const { return "challenge"; }
  };
  return std::visit(Namer{}, d);
}

std::string describe(const AdaptationDirective& d) {
  struct Describer {
    std::string operator()(const directive::Resize& r) const {
      return "resize widget=" + r.widget + " length=" + std::to_string(r.new_length);
    }
    std::string operator()(const directive::Reorient& r) const {
      return "reorient widget=" + r.widget + " orientation=" + std::string(to_string(r.new_orientation)) +
             " length=" + std::to_string(r.new_length);
    }
    std::string operator()(const directive::Lock& l) const { return "lock reason=" + std::string(to_string(l.reason)); }
    std::string operator()(const directive::Unlock&) const { return "unlock"; }
    std::string operator()(const directive::Alert& a) const {
      return "alert level=" + std::string(to_string(a.level)) + " message=" + a.message;
    }
    std::string operator()(const directive::Page& p) const { return "page winner=" + p.winner; }
    std::string operator()(const directive::Restore&) const { return "restore"; }
    std::string operator()(const directive::Hide& h) const { return "hide widget=" + h.widget; }
    std::string operator()(const directive::Challenge& c) const { return "challenge kind=" + c.kind; }
  };
  return std::visit(Describer{}, d);
}

std::string_view to_string(PagingPolicy p) {
  switch (p) {
    case PagingPolicy::None: return "none";
    case PagingPolicy::WinnerTakesAll: return "winner_takes_all";
    case PagingPolicy::LfuEvict: return "lfu_evict";
  }
  return "?";
}

std::optional<PagingPolicy> paging_policy_from_string(std::string_view text) {
  for (auto p : {PagingPolicy::None, PagingPolicy::WinnerTakesAll, PagingPolicy::LfuEvict}) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::string_view to_string(SafeDefault s) { return s == SafeDefault::None ? "none" : "lock"; }

std::optional<SafeDefault> safe_default_from_string(std::string_view text) {
  if (text == "none") return SafeDefault::None;
  if (text == "lock") return SafeDefault::Lock;
  return std::nullopt;
}

std::optional<AdaptationDirective> plan_scale(const WidgetState& widget, const Detection& burst,
                                              const ContextModel& ctx) {
  if (burst.verdict != Verdict::KO) return std::nullopt;
  if (widget.orientation == Orientation::Vertical) return std::nullopt;
  const int grown = widget.length + ctx.scale_growth_step;
  if (grown < ctx.screen_width - ctx.scale_margin) return directive::Resize{widget.id, grown};
  return directive::Reorient{widget.id, Orientation::Vertical, std::min(ctx.screen_height, ctx.vertical_length)};
}

std::optional<AdaptationDirective> plan_scale(const UIModel& ui, std::string_view widget_id, const Detection& burst,
                                              const ContextModel& ctx) {
  const WidgetState* w = ui.find(widget_id);
  if (w == nullptr) throw Error(ErrorCode::UnknownWidget, std::string(widget_id));
  return plan_scale(*w, burst, ctx);
}

std::vector<AdaptationDirective> plan_situation(const Situation& s, SafeDefault safe_default) {
  using namespace directive;
  switch (s.id) {
    case SituationId::S1_UserChanged:
      return {Lock{s.id}, Alert{AlertLevel::Warning, "user likely changed; credentials required"}};
    case SituationId::S2_BotTakeover:
      return {Lock{s.id}, Challenge{"captcha"},
              Alert{AlertLevel::Critical, "user likely replaced by an automated agent; challenge issued"}};
    case SituationId::PerfFailure: {
      std::vector<AdaptationDirective> out{Alert{AlertLevel::Warning, "no interaction within the agreed deadline"}};
      if (safe_default == SafeDefault::Lock) out.emplace_back(Lock{s.id});
      return out;
    }
  }
  return {};
}

std::optional<AdaptationDirective> plan_paging(const UIModel& ui, PagingPolicy policy, const ContextModel& ctx) {
  if (ui.widgets.empty()) return std::nullopt;
  switch (policy) {
    case PagingPolicy::None:
      return std::nullopt;
    case PagingPolicy::WinnerTakesAll: {
      const WidgetState* best = &ui.widgets.front();
      for (const WidgetState& w : ui.widgets) {
        if (w.usage_count > best->usage_count ||
            (w.usage_count == best->usage_count && w.last_used > best->last_used)) {
          best = &w;
        }
      }
      if (ui.paged_to && *ui.paged_to == best->id) return std::nullopt;
      return directive::Page{best->id};
    }
    case PagingPolicy::LfuEvict: {
      if (ui.paged_to) return std::nullopt;
      const long demanded = std::accumulate(ui.widgets.begin(), ui.widgets.end(), 0L, [](long acc, const WidgetState& w) {
        return w.visible ? acc + w.length : acc;
      });
      if (demanded <= ctx.screen_height) return std::nullopt;
      const WidgetState* victim = nullptr;
      for (const WidgetState& w : ui.widgets) {
        if (!w.visible) continue;
        if (victim == nullptr || w.usage_count < victim->usage_count ||
            (w.usage_count == victim->usage_count && w.last_used < victim->last_used)) {
          victim = &w;
        }
      }
      if (victim == nullptr) return std::nullopt;
      return directive::Hide{victim->id};
    }
  }
  return std::nullopt;
}

AdaptationDirective restore(const UIModel& ui) {
  if (!ui.paged_to) throw Error(ErrorCode::NotPaged, "no widget holds the page");
  return directive::Restore{};
}

UIModel apply_directive(const UIModel& ui, const AdaptationDirective& d) {
  UIModel out = ui;
  const auto widget = [&](const std::string& id) -> WidgetState& {
    WidgetState* w = out.find(id);
    if (w == nullptr) throw Error(ErrorCode::UnknownWidget, id);
    return *w;
  };
  if (const auto* r = std::get_if<directive::Resize>(&d)) {
    widget(r->widget).length = r->new_length;
  } else if (const auto* r = std::get_if<directive::Reorient>(&d)) {
    WidgetState& w = widget(r->widget);
    w.orientation = r->new_orientation;
    w.length = r->new_length;
  } else if (const auto* p = std::get_if<directive::Page>(&d)) {
    widget(p->winner);
    for (WidgetState& w : out.widgets) w.visible = w.id == p->winner;
    out.paged_to = p->winner;
  } else if (std::holds_alternative<directive::Restore>(d)) {
    for (WidgetState& w : out.widgets) w.visible = true;
    out.paged_to.reset();
  } else if (const auto* h = std::get_if<directive::Hide>(&d)) {
    widget(h->widget).visible = false;
  }
  return out;
}

}  // namespace icode

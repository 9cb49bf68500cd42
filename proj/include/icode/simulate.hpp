#pragma once

// Synthetic iCode generator for test fixtures and demos.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icode/model.hpp"

namespace icode {

struct Profile {
  std::string name;
  double mean_chars_per_sec = 2.0;
  std::pair<std::int64_t, std::int64_t> pause_ms_range{1000, 3000};
  double button_burst_prob = 0.0;
  double delete_prob = 0.1;
  double scale_prob = 0.3;
  std::uint64_t seed = 0;

  static Profile normal();
  static Profile distressed();
  static Profile bot();
  /// normal | distressed | bot
  static std::optional<Profile> named(std::string_view name);
};

/// Raw time of the first simulated event.
inline constexpr std::int64_t kSimulationEpoch = 1361881945000;

/// Deterministic for a given profile and seed. Words are typed at the
/// profile's rate with +/-20% jitter, separated by pauses, scale moves and
/// button presses; the last word is followed by button(Exit).
std::vector<Event> simulate(const Profile& profile, std::int64_t duration_ms, std::uint64_t seed);

/// simulate() rendered as an iCode document, one line per event.
std::string simulate_document(const Profile& profile, std::int64_t duration_ms, std::uint64_t seed);

}  // namespace icode

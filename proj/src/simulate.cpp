#include "icode/simulate.hpp"

#include <random>

#include "icode/error.hpp"
#include "icode/parser.hpp"

namespace icode {

Profile Profile::normal() { return {"normal", 2.0, {1000, 3000}, 0.0, 0.1, 0.3, 0}; }
Profile Profile::distressed() { return {"distressed", 5.0, {300, 1200}, 0.3, 0.25, 0.3, 0}; }
Profile Profile::bot() { return {"bot", 15.0, {50, 150}, 0.0, 0.0, 0.0, 0}; }

std::optional<Profile> Profile::named(std::string_view name) {
  if (name == "normal") return normal();
  if (name == "distressed") return distressed();
  if (name == "bot") return bot();
  return std::nullopt;
}

std::vector<Event> simulate(const Profile& profile, std::int64_t duration_ms, std::uint64_t seed) {
  if (duration_ms <= 0) throw Error(ErrorCode::InvalidConfig, "duration must be positive");
  if (!(profile.mean_chars_per_sec > 0.0)) throw Error(ErrorCode::InvalidConfig, "typing rate must be positive");

  std::mt19937_64 rng(seed);
  const double interval = 1000.0 / profile.mean_chars_per_sec;
  std::uniform_real_distribution<double> jitter(0.8 * interval, 1.2 * interval);
  std::uniform_int_distribution<std::int64_t> pause(profile.pause_ms_range.first, profile.pause_ms_range.second);
  std::uniform_int_distribution<int> word_len(3, 8);
  std::uniform_int_distribution<int> letter('a', 'z');
  std::uniform_int_distribution<int> scale_moves(1, 3);
  std::uniform_int_distribution<int> scale_step(0, 5);
  std::uniform_int_distribution<std::int64_t> scale_gap(400, 900);
  std::uniform_int_distribution<std::int64_t> double_click(80, 200);
  std::bernoulli_distribution del(profile.delete_prob);
  std::bernoulli_distribution scale(profile.scale_prob);
  std::bernoulli_distribution burst(profile.button_burst_prob);

  std::vector<Event> out;
  std::int64_t t = kSimulationEpoch;
  const std::int64_t end = kSimulationEpoch + duration_ms;
  std::string text;
  const auto at = [](std::int64_t ms) { return Timestamp{ms}; };
  // Jittered intervals accumulate as doubles so the mean rate is exact.
  double clock = static_cast<double>(t);

  while (t < end) {
    out.push_back(Event::entry_focus("focusin", at(t)));
    const int n = word_len(rng);
    for (int i = 0; i < n; ++i) {
      clock += jitter(rng);
      t = static_cast<std::int64_t>(clock);
      if (!text.empty() && del(rng)) {
        const std::string gone(1, text.back());
        text.pop_back();
        out.push_back(Event::entry_delete("key", gone, static_cast<std::int64_t>(text.size()), at(t)));
      } else {
        const std::string c(1, static_cast<char>(letter(rng)));
        out.push_back(Event::entry_insert("key", c, static_cast<std::int64_t>(text.size()), at(t)));
        text += c;
      }
    }
    t += pause(rng);
    if (t >= end) break;
    if (scale(rng)) {
      const int moves = scale_moves(rng);
      for (int i = 0; i < moves; ++i) {
        out.push_back(Event::scale(20 + 10 * scale_step(rng), at(t)));
        t += scale_gap(rng);
      }
    }
    out.push_back(Event::button_pressed(at(t)));
    if (burst(rng)) {
      t += double_click(rng);
      out.push_back(Event::button_pressed(at(t)));
    }
    t += pause(rng);
    clock = static_cast<double>(t);
  }
  out.push_back(Event::button_exit(at(t)));
  return out;
}

std::string simulate_document(const Profile& profile, std::int64_t duration_ms, std::uint64_t seed) {
  std::string doc;
  for (const Event& e : simulate(profile, duration_ms, seed)) {
    doc += format_event(e);
    doc += '\n';
  }
  return doc;
}

}  // namespace icode

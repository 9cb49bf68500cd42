#include "icode/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "icode/error.hpp"

namespace icode {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T number(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidConfig, std::string(key) + ": not a number: " + std::string(text));
  }
  return value;
}

std::vector<std::string> list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const auto item = trim(text.substr(pos, comma - pos));
    if (!item.empty()) out.emplace_back(item);
    pos = comma + 1;
  }
  return out;
}

using Setter = std::function<void(EngineConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"fastest_avg_entry_ms", [](EngineConfig& c, auto k, auto v) { c.analyzer.fastest_avg_entry_ms = number<double>(k, v); }},
      {"enabled_detectors", [](EngineConfig& c, auto, auto v) { c.analyzer.enabled_detectors = list(v); }},
      {"s1_consecutive_ko", [](EngineConfig& c, auto k, auto v) { c.situations.s1_consecutive_ko = number<int>(k, v); }},
      {"s2_consecutive_fast", [](EngineConfig& c, auto k, auto v) { c.situations.s2_consecutive_fast = number<int>(k, v); }},
      {"s2_superhuman_ms", [](EngineConfig& c, auto k, auto v) { c.situations.s2_superhuman_ms = number<double>(k, v); }},
      {"perf_deadline_ms", [](EngineConfig& c, auto k, auto v) { c.situations.perf_deadline_ms = number<std::int64_t>(k, v); }},
      {"screen_width", [](EngineConfig& c, auto k, auto v) { c.context.screen_width = number<int>(k, v); }},
      {"screen_height", [](EngineConfig& c, auto k, auto v) { c.context.screen_height = number<int>(k, v); }},
      {"scale_initial_length", [](EngineConfig& c, auto k, auto v) { c.context.scale_initial_length = number<int>(k, v); }},
      {"scale_growth_step", [](EngineConfig& c, auto k, auto v) { c.context.scale_growth_step = number<int>(k, v); }},
      {"scale_margin", [](EngineConfig& c, auto k, auto v) { c.context.scale_margin = number<int>(k, v); }},
      {"vertical_length", [](EngineConfig& c, auto k, auto v) { c.context.vertical_length = number<int>(k, v); }},
      {"user_profile", [](EngineConfig& c, auto, auto v) { c.context.user_profile = list(v); }},
      {"paging_policy",
       [](EngineConfig& c, auto k, auto v) {
         auto p = paging_policy_from_string(v);
         if (!p) throw Error(ErrorCode::InvalidConfig, std::string(k) + ": unknown policy " + std::string(v));
         c.paging_policy = *p;
       }},
      {"safe_default_action",
       [](EngineConfig& c, auto k, auto v) {
         auto s = safe_default_from_string(v);
         if (!s) throw Error(ErrorCode::InvalidConfig, std::string(k) + ": unknown action " + std::string(v));
         c.safe_default_action = *s;
       }},
  };
  return table;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

void EngineConfig::validate() const {
  analyzer.validate();
  situations.validate(analyzer.fastest_avg_entry_ms);
  context.validate();
}

EngineConfig parse_config(std::string_view text) {
  EngineConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw Error(ErrorCode::InvalidConfig, where + "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw Error(ErrorCode::InvalidConfig, where + "unknown key " + std::string(key));
    if (!seen.emplace(key).second) throw Error(ErrorCode::InvalidConfig, where + "duplicate key " + std::string(key));
    try {
      it->second(cfg, key, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidConfig, where + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

EngineConfig resolve_config(const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) return load_config(*explicit_path);
  if (const char* env = std::getenv("ICODE_CONFIG"); env != nullptr && *env != '\0') return load_config(env);
  return EngineConfig{};
}

std::string to_text(const EngineConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "fastest_avg_entry_ms = " << c.analyzer.fastest_avg_entry_ms << '\n'
      << "enabled_detectors = " << join(c.analyzer.enabled_detectors) << '\n'
      << "s1_consecutive_ko = " << c.situations.s1_consecutive_ko << '\n'
      << "s2_consecutive_fast = " << c.situations.s2_consecutive_fast << '\n'
      << "s2_superhuman_ms = " << c.situations.s2_superhuman_ms << '\n'
      << "perf_deadline_ms = " << c.situations.perf_deadline_ms << '\n'
      << "screen_width = " << c.context.screen_width << '\n'
      << "screen_height = " << c.context.screen_height << '\n'
      << "scale_initial_length = " << c.context.scale_initial_length << '\n'
      << "scale_growth_step = " << c.context.scale_growth_step << '\n'
      << "scale_margin = " << c.context.scale_margin << '\n'
      << "vertical_length = " << c.context.vertical_length << '\n'
      << "user_profile = " << join(c.context.user_profile) << '\n'
      << "paging_policy = " << to_string(c.paging_policy) << '\n'
      << "safe_default_action = " << to_string(c.safe_default_action) << '\n';
  return out.str();
}

}  // namespace icode

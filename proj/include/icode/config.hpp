#pragma once

// Engine configuration and its "key = value" text form.
//
//   # comment
//   fastest_avg_entry_ms = 330.0
//   enabled_detectors = button-before-entry, button-burst, fast-entry
//   s1_consecutive_ko = 3
//   ...

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "icode/analyzers.hpp"
#include "icode/planner.hpp"
#include "icode/situations.hpp"

namespace icode {

struct EngineConfig {
  AnalyzerConfig analyzer;
  SituationConfig situations;
  ContextModel context;
  PagingPolicy paging_policy = PagingPolicy::None;
  SafeDefault safe_default_action = SafeDefault::None;

  /// Validates every section and the cross-section constraints.
  void validate() const;
  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

/// Parses config text over the defaults. Unknown keys, bad values and
/// duplicate keys throw InvalidConfig naming the line.
EngineConfig parse_config(std::string_view text);

/// Reads and parses a config file; throws Io when unreadable.
EngineConfig load_config(const std::filesystem::path& path);

/// Explicit path if given, else $ICODE_CONFIG, else defaults.
EngineConfig resolve_config(const std::optional<std::filesystem::path>& explicit_path);

/// Canonical text of `cfg`; parse_config(to_text(cfg)) == cfg.
std::string to_text(const EngineConfig& cfg);

}  // namespace icode

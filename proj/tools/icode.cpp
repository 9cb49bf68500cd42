// icode: batch analysis, timelines, synthetic traces and the live session
// server.

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "icode/config.hpp"
#include "icode/error.hpp"
#include "icode/parser.hpp"
#include "icode/protocol.hpp"
#include "icode/report.hpp"
#include "icode/simulate.hpp"
#include "icode/timeline.hpp"

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::optional<std::filesystem::path> as_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

bool write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << out_path << '\n';
    return false;
  }
  out << text;
  return true;
}

icode::LineServer* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interaction telemetry analysis and adaptation"};
  app.require_subcommand(1);

  std::string file;
  std::string config_path;
  std::string out_path;

  auto* analyze = app.add_subcommand("analyze", "Analyze an iCode log (exit 0 clean, 1 KO, 2 parse error)");
  analyze->add_option("file", file, "iCode log")->required();
  analyze->add_option("--config", config_path, "config file (falls back to $ICODE_CONFIG)");

  std::string format = "text";
  double ms_per_px = 10.0;
  std::size_t columns = 72;
  auto* timeline = app.add_subcommand("timeline", "Render an interaction summary");
  timeline->add_option("file", file, "iCode log")->required();
  timeline->add_option("--format", format, "text or svg")->check(CLI::IsMember({"text", "svg"}));
  timeline->add_option("--out", out_path, "output file (default stdout)");
  timeline->add_option("--config", config_path, "config file (falls back to $ICODE_CONFIG)");
  timeline->add_option("--ms-per-px", ms_per_px, "svg horizontal scale")->check(CLI::PositiveNumber);
  timeline->add_option("--columns", columns, "text chart width")->check(CLI::PositiveNumber);

  std::string profile_name;
  std::int64_t duration_ms = 0;
  std::uint64_t seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic iCode log");
  simulate->add_option("--profile", profile_name, "normal, distressed or bot")
      ->required()
      ->check(CLI::IsMember({"normal", "distressed", "bot"}));
  simulate->add_option("--duration-ms", duration_ms, "simulated duration")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "random seed")->required();
  simulate->add_option("--out", out_path, "output file (default stdout)");

  int port = 0;
  std::string blackbox_dir;
  bool any_interface = false;
  auto* serve = app.add_subcommand("serve", "Serve live sessions over the line protocol");
  serve->add_option("--port", port, "TCP port")->required()->check(CLI::Range(0, 65535));
  serve->add_option("--config", config_path, "config file (falls back to $ICODE_CONFIG)");
  serve->add_option("--blackbox-dir", blackbox_dir, "directory for per-session blackbox logs");
  serve->add_flag("--any-interface", any_interface, "listen on all interfaces instead of loopback");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze || *timeline) {
      const icode::EngineConfig cfg = icode::resolve_config(as_path(config_path));
      const auto text = read_file(file);
      if (!text) {
        std::cerr << "cannot read " << file << '\n';
        return icode::kExitParseError;
      }
      if (*analyze) {
        const icode::AnalyzeResult result = icode::analyze_document(*text, cfg, file);
        std::cout << result.text;
        if (result.exit_code == icode::kExitParseError) std::cerr << result.error << '\n';
        return result.exit_code;
      }
      icode::StreamResult parsed;
      try {
        parsed = icode::parse_stream(icode::split_lines(*text), icode::ParseMode::Strict);
      } catch (const icode::Error& e) {
        std::cerr << e.what() << '\n';
        return icode::kExitParseError;
      }
      const icode::TimelineDoc doc = icode::build_timeline(parsed.trace, cfg.analyzer);
      const std::string rendered = format == "svg" ? icode::render_svg(doc, ms_per_px) : icode::render_text(doc, columns);
      return write_output(out_path, rendered) ? 0 : 1;
    }
    if (*simulate) {
      const icode::Profile profile = *icode::Profile::named(profile_name);
      return write_output(out_path, icode::simulate_document(profile, duration_ms, seed)) ? 0 : 1;
    }
    if (*serve) {
      const icode::EngineConfig cfg = icode::resolve_config(as_path(config_path));
      icode::LineServer server(cfg, static_cast<std::uint16_t>(port), as_path(blackbox_dir));
      server.start(any_interface);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on port " << server.port() << '\n';
      server.wait();
      g_server = nullptr;
      return 0;
    }
  } catch (const icode::Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == icode::ErrorCode::InvalidConfig || e.code() == icode::ErrorCode::Io ? icode::kExitParseError : 1;
  }
  return 0;
}

#pragma once

// Newline-delimited live protocol spoken by `serve`.
//
// Inbound:  iCode event lines, "REAUTH ok|fail <principal>",
//           "CHALLENGE ok|fail", "RESTORE".
// Outbound: "DETECTION <id> <verdict> start=.. end=.. ...",
//           "SITUATION <id> onset=<ms>", "DIRECTIVE <name> <key=value ...>",
//           "ALERT <level> <message>", "ERROR <message>", "BYE".

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "icode/config.hpp"
#include "icode/session.hpp"

namespace icode {

/// Outbound line for a directive: ALERT for alerts, DIRECTIVE otherwise.
std::string directive_line(const AdaptationDirective& d);

/// True for DIRECTIVE and ALERT lines.
bool is_directive_line(std::string_view line);

/// Protocol state machine for one connection, independent of any socket.
class LiveSession {
 public:
  explicit LiveSession(EngineConfig cfg = {});

  /// Handles one inbound line (without its newline) and returns the outbound
  /// lines. Protocol violations answer with an ERROR line; the session goes on.
  std::vector<std::string> handle_line(std::string_view line);

  bool finished() const { return session_.terminated(); }
  const Session& session() const { return session_; }

 private:
  Session session_;
};

/// All outbound lines a fresh LiveSession produces for `lines`, stopping
/// after the session ends.
std::vector<std::string> run_offline(const std::vector<std::string>& lines, const EngineConfig& cfg);

/// TCP line server: one session per connection, connections served
/// concurrently. When a session ends its blackbox goes to blackbox_dir.
class LineServer {
 public:
  LineServer(EngineConfig cfg, std::uint16_t port, std::optional<std::filesystem::path> blackbox_dir = std::nullopt);
  ~LineServer();
  LineServer(const LineServer&) = delete;
  LineServer& operator=(const LineServer&) = delete;

  /// Binds 127.0.0.1 (or all interfaces when `any_interface`) and starts
  /// accepting. Throws Io when the port cannot be bound.
  void start(bool any_interface = false);
  void stop();
  /// Blocks until stop() is called from elsewhere.
  void wait();

  std::uint16_t port() const { return port_; }
  std::size_t sessions_completed() const { return completed_.load(); }

 private:
  void accept_loop();
  void serve_connection(int fd, std::size_t id);

  EngineConfig cfg_;
  std::uint16_t port_;
  std::optional<std::filesystem::path> blackbox_dir_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::atomic<std::size_t> next_id_{0};
  std::atomic<std::size_t> completed_{0};
  std::thread acceptor_;
  std::mutex workers_mu_;
  std::vector<std::thread> workers_;
  std::vector<int> open_fds_;
};

}  // namespace icode

#include "icode/protocol.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cerrno>
#include <cstring>
#include <fstream>

#include "icode/error.hpp"
#include "icode/parser.hpp"

namespace icode {

std::string directive_line(const AdaptationDirective& d) {
  if (const auto* a = std::get_if<directive::Alert>(&d)) {
    return "ALERT " + std::string(to_string(a->level)) + " " + a->message;
  }
  return "DIRECTIVE " + describe(d);
}

bool is_directive_line(std::string_view line) {
  return line.starts_with("DIRECTIVE ") || line.starts_with("ALERT ");
}

LiveSession::LiveSession(EngineConfig cfg) : session_(std::move(cfg)) {}

namespace {

void append_step(std::vector<std::string>& out, const StepOutput& step) {
  for (const Detection& d : step.detections) {
    std::string line = "DETECTION " + d.detector + " " + std::string(to_string(d.verdict)) +
                       " start=" + std::to_string(d.span.start) + " end=" + std::to_string(d.span.end);
    if (d.metrics.gradient_ms_per_char) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", *d.metrics.gradient_ms_per_char);
      line += std::string(" gradient=") + buf;
    }
    if (d.metrics.run_length) line += " run_length=" + std::to_string(*d.metrics.run_length);
    out.push_back(std::move(line));
  }
  for (const Situation& s : step.situations) {
    out.push_back("SITUATION " + std::string(to_string(s.id)) + " onset=" + std::to_string(s.onset));
  }
  for (const AdaptationDirective& d : step.directives) out.push_back(directive_line(d));
}

std::optional<bool> verdict_word(std::string_view w) {
  if (w == "ok") return true;
  if (w == "fail") return false;
  return std::nullopt;
}

}  // namespace

std::vector<std::string> LiveSession::handle_line(std::string_view line) {
  std::vector<std::string> out;
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  try {
    if (line.starts_with("REAUTH ")) {
      std::string_view rest = line.substr(7);
      const auto sp = rest.find(' ');
      const auto verdict = verdict_word(rest.substr(0, sp));
      if (!verdict) {
        out.push_back("ERROR expected \"REAUTH ok|fail <principal>\"");
        return out;
      }
      const std::string principal = sp == std::string_view::npos ? "" : std::string(rest.substr(sp + 1));
      append_step(out, session_.handle_reauth({*verdict, principal}));
      return out;
    }
    if (line.starts_with("CHALLENGE ")) {
      const auto verdict = verdict_word(line.substr(10));
      if (!verdict) {
        out.push_back("ERROR expected \"CHALLENGE ok|fail\"");
        return out;
      }
      append_step(out, session_.handle_challenge(*verdict));
      return out;
    }
    if (line == "RESTORE") {
      append_step(out, session_.request_restore());
      return out;
    }
    ParseOutcome parsed = parse_line(line, session_.state().trace.size() + 1, ParseMode::Recovery);
    if (parsed.diagnostic) {
      out.push_back("ERROR " + parsed.diagnostic->message + " at column " + std::to_string(parsed.diagnostic->column));
      return out;
    }
    append_step(out, session_.ingest(std::move(*parsed.event)));
    if (session_.terminated()) out.emplace_back("BYE");
  } catch (const Error& e) {
    out.push_back(std::string("ERROR ") + e.what());
  }
  return out;
}

std::vector<std::string> run_offline(const std::vector<std::string>& lines, const EngineConfig& cfg) {
  LiveSession live(cfg);
  std::vector<std::string> out;
  for (const std::string& line : lines) {
    for (std::string& o : live.handle_line(line)) out.push_back(std::move(o));
    if (live.finished()) break;
  }
  return out;
}

LineServer::LineServer(EngineConfig cfg, std::uint16_t port, std::optional<std::filesystem::path> blackbox_dir)
    : cfg_(std::move(cfg)), port_(port), blackbox_dir_(std::move(blackbox_dir)) {
  cfg_.validate();
}

LineServer::~LineServer() { stop(); }

void LineServer::start(bool any_interface) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error(ErrorCode::Io, std::string("socket: ") + std::strerror(errno));
  int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(any_interface ? INADDR_ANY : INADDR_LOOPBACK);
  addr.sin_port = htons(port_);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 16) != 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error(ErrorCode::Io, "cannot listen on port " + std::to_string(port_) + ": " + why);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  if (blackbox_dir_) std::filesystem::create_directories(*blackbox_dir_);
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void LineServer::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(workers_mu_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

void LineServer::wait() {
  while (running_) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

void LineServer::accept_loop() {
  while (running_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (!running_) break;
      continue;
    }
    std::lock_guard lock(workers_mu_);
    open_fds_.push_back(fd);
    const std::size_t id = next_id_++;
    workers_.emplace_back([this, fd, id] { serve_connection(fd, id); });
  }
}

namespace {

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n <= 0) return false;
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

}  // namespace

void LineServer::serve_connection(int fd, std::size_t id) {
  LiveSession live(cfg_);
  std::string pending;
  char buf[4096];
  bool open = true;
  while (open && !live.finished()) {
    const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n <= 0) break;
    pending.append(buf, static_cast<std::size_t>(n));
    std::size_t nl;
    while ((nl = pending.find('\n')) != std::string::npos) {
      const std::string line = pending.substr(0, nl);
      pending.erase(0, nl + 1);
      std::string reply;
      for (const std::string& o : live.handle_line(line)) reply += o + "\n";
      if (!reply.empty() && !send_all(fd, reply)) open = false;
      if (live.finished() || !open) break;
    }
  }
  if (blackbox_dir_) {
    std::ofstream outf(*blackbox_dir_ / ("session-" + std::to_string(id) + ".blackbox"));
    outf << live.session().export_blackbox();
  }
  {
    std::lock_guard lock(workers_mu_);
    std::erase(open_fds_, fd);
  }
  ::shutdown(fd, SHUT_RDWR);
  ::close(fd);
  ++completed_;
}

}  // namespace icode

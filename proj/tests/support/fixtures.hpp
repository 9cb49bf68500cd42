#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "icode/parser.hpp"

namespace icode::testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(ICODE_FIXTURES) / name; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> fixture_lines(const std::string& name) { return split_lines(slurp(fixture(name))); }

inline std::vector<std::filesystem::path> session_fixtures() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(fixture("sessions"))) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

/// Sends every line over one TCP connection to 127.0.0.1:port, half-closes,
/// and returns all reply lines until the server closes.
inline std::vector<std::string> exchange(std::uint16_t port, const std::vector<std::string>& lines) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd);
    return {"<connect failed>"};
  }
  std::string payload;
  for (const auto& l : lines) payload += l + "\n";
  std::string_view rest = payload;
  while (!rest.empty()) {
    const ssize_t n = ::send(fd, rest.data(), rest.size(), MSG_NOSIGNAL);
    if (n <= 0) break;
    rest.remove_prefix(static_cast<std::size_t>(n));
  }
  ::shutdown(fd, SHUT_WR);
  std::string got;
  char buf[4096];
  ssize_t n;
  while ((n = ::recv(fd, buf, sizeof buf, 0)) > 0) got.append(buf, static_cast<std::size_t>(n));
  ::close(fd);
  return split_lines(got);
}

}  // namespace icode::testing

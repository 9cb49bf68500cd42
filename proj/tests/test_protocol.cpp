#include <gtest/gtest.h>

#include <algorithm>
#include <future>

#include "icode/error.hpp"
#include "icode/protocol.hpp"
#include "icode/session.hpp"
#include "support/fixtures.hpp"

namespace icode {
namespace {

using testing::exchange;
using testing::fixture_lines;
using testing::session_fixtures;

std::vector<std::string> directive_lines(const std::vector<std::string>& lines) {
  std::vector<std::string> out;
  std::copy_if(lines.begin(), lines.end(), std::back_inserter(out), [](const std::string& l) { return is_directive_line(l); });
  return out;
}

std::vector<std::string> as_lines(const std::vector<AdaptationDirective>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(directive_line(d));
  return out;
}

bool has_prefix(const std::vector<std::string>& lines, std::string_view prefix) {
  return std::any_of(lines.begin(), lines.end(), [&](const std::string& l) { return l.starts_with(prefix); });
}

TEST(LiveSession, BenignFormEmitsNoLock) {
  const auto out = run_offline(fixture_lines("benign_form.icode"), {});
  EXPECT_FALSE(has_prefix(out, "DIRECTIVE lock"));
  EXPECT_EQ(out.back(), "BYE");
}

TEST(LiveSession, LockoutThenReauth) {
  LiveSession live;
  const std::vector<std::string> before = {"entry(Focus) name '' -1 @0", "button(Pressed) @1000",
                                           "button(Pressed) @1100", "button(Pressed) @1200"};
  for (const auto& l : before) EXPECT_FALSE(has_prefix(live.handle_line(l), "DIRECTIVE lock"));
  const auto locking = live.handle_line("button(Pressed) @1300");
  EXPECT_TRUE(has_prefix(locking, "SITUATION S1_UserChanged onset=1300"));
  EXPECT_TRUE(has_prefix(locking, "DIRECTIVE lock reason=S1_UserChanged"));
  for (int i = 0; i < 5; ++i) {
    EXPECT_TRUE(live.handle_line("entry(Ins) name 'a' " + std::to_string(i) + " @" + std::to_string(1400 + 50 * i)).empty());
  }
  const auto fail = live.handle_line("REAUTH fail mallory");
  EXPECT_EQ(fail, std::vector<std::string>{"ALERT critical re-authentication failed"});
  EXPECT_EQ(live.handle_line("REAUTH ok alice"), std::vector<std::string>{"DIRECTIVE unlock"});
  EXPECT_EQ(live.handle_line("REAUTH ok alice"),
            std::vector<std::string>{"ERROR NotLocked: re-authentication without a lock"});
}

TEST(LiveSession, MalformedLineKeepsSessionAlive) {
  LiveSession live;
  const auto bad = live.handle_line("entry(Ins) name 'a' 0");
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_TRUE(bad[0].starts_with("ERROR ")) << bad[0];
  EXPECT_NE(bad[0].find("column"), std::string::npos);
  EXPECT_EQ(live.session().state().trace.size(), 0u);
  EXPECT_TRUE(live.handle_line("entry(Focus) name '' -1 @10").empty());
  EXPECT_EQ(live.session().state().trace.size(), 1u);
}

TEST(LiveSession, ControlLineErrors) {
  LiveSession live;
  EXPECT_TRUE(live.handle_line("REAUTH maybe bob")[0].starts_with("ERROR "));
  EXPECT_TRUE(live.handle_line("CHALLENGE ok")[0].starts_with("ERROR NoChallenge"));
  EXPECT_TRUE(live.handle_line("RESTORE")[0].starts_with("ERROR NotPaged"));
}

TEST(LiveSession, ExitSaysBye) {
  LiveSession live;
  live.handle_line("entry(Focus) name '' -1 @0");
  EXPECT_EQ(live.handle_line("button(Exit) @900").back(), "BYE");
  EXPECT_TRUE(live.finished());
  EXPECT_TRUE(live.handle_line("button(Pressed) @1000")[0].starts_with("ERROR SessionTerminated"));
}

TEST(LiveSession, OfflineMatchesSessionReplay) {
  for (const auto& path : session_fixtures()) {
    const auto lines = split_lines(testing::slurp(path));
    LiveSession live;
    std::vector<std::string> out;
    for (const auto& l : lines) {
      for (auto& o : live.handle_line(l)) out.push_back(o);
      if (live.finished()) break;
    }
    const ReplayResult replay = replay_blackbox(live.session().export_blackbox(), {});
    EXPECT_EQ(directive_lines(out), as_lines(replay.directives)) << path;
  }
}

TEST(LineServer, ServedSessionsMatchOfflineReplay) {
  const auto dir = std::filesystem::temp_directory_path() / ("icode-serve-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  LineServer server({}, 0, dir);
  server.start();
  ASSERT_NE(server.port(), 0);

  const auto paths = session_fixtures();
  ASSERT_EQ(paths.size(), 5u);
  std::vector<std::future<std::vector<std::string>>> replies;
  for (const auto& p : paths) {
    replies.push_back(std::async(std::launch::async, [&server, p] {
      return exchange(server.port(), split_lines(testing::slurp(p)));
    }));
  }
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto lines = split_lines(testing::slurp(paths[i]));
    const auto served = replies[i].get();
    EXPECT_EQ(served, run_offline(lines, {})) << paths[i];
  }
  for (int i = 0; i < 100 && server.sessions_completed() < paths.size(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  server.stop();
  ASSERT_EQ(server.sessions_completed(), paths.size());

  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    ++files;
    const std::string doc = testing::slurp(e.path());
    EXPECT_TRUE(doc.starts_with(kBlackboxHeader));
    const ReplayResult r = replay_blackbox(doc, {});
    EXPECT_EQ(r.session.export_blackbox(), doc);
  }
  EXPECT_EQ(files, paths.size());
  std::filesystem::remove_all(dir);
}

TEST(LineServer, BusyPortIsAnIoError) {
  LineServer first({}, 0);
  first.start();
  LineServer second({}, first.port());
  EXPECT_THROW(second.start(), Error);
}

}  // namespace
}  // namespace icode

#include <gtest/gtest.h>

#include <random>

#include "icode/error.hpp"
#include "icode/planner.hpp"

namespace icode {
namespace {

using namespace directive;

Detection scale_burst(Verdict v = Verdict::KO) { return {"scale-burst", v, {0, 3}, {}}; }

WidgetState scale_widget(int length, Orientation o = Orientation::Horizontal) {
  return {std::string(kAgeScale), o, length, 0, 0, true};
}

TEST(PlanScale, GrowsByOneStep) {
  const ContextModel ctx;
  EXPECT_EQ(plan_scale(scale_widget(200), scale_burst(), ctx), AdaptationDirective(Resize{"age_scale", 220}));
  EXPECT_EQ(plan_scale(scale_widget(220), scale_burst(), ctx), AdaptationDirective(Resize{"age_scale", 240}));
}

TEST(PlanScale, FlipsToVerticalWhenGrowthWouldOverflow) {
  EXPECT_EQ(plan_scale(scale_widget(240), scale_burst(), {}),
            AdaptationDirective(Reorient{"age_scale", Orientation::Vertical, 260}));
}

TEST(PlanScale, VerticalSaturates) {
  EXPECT_FALSE(plan_scale(scale_widget(260, Orientation::Vertical), scale_burst(), {}));
}

TEST(PlanScale, IgnoresUnflaggedBursts) { EXPECT_FALSE(plan_scale(scale_widget(200), scale_burst(Verdict::OK), {})); }

TEST(PlanScale, MarginShrinksTheBound) {
  ContextModel ctx;
  ctx.scale_margin = 30;
  EXPECT_EQ(plan_scale(scale_widget(220), scale_burst(), ctx),
            AdaptationDirective(Reorient{"age_scale", Orientation::Vertical, 260}));
}

TEST(PlanScale, UnknownWidget) {
  const ContextModel ctx;
  const UIModel ui = UIModel::demo(ctx);
  try {
    plan_scale(ui, "slider_2", scale_burst(), ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownWidget);
  }
}

TEST(PlanScale, ThreeBurstsFollowTheReferenceTrajectory) {
  const ContextModel ctx;
  UIModel ui = UIModel::demo(ctx);
  std::vector<AdaptationDirective> got;
  for (int i = 0; i < 3; ++i) {
    auto d = plan_scale(ui, kAgeScale, scale_burst(), ctx);
    ASSERT_TRUE(d);
    got.push_back(*d);
    ui = apply_directive(ui, *d);
  }
  const std::vector<AdaptationDirective> expected = {Resize{"age_scale", 220}, Resize{"age_scale", 240},
                                                     Reorient{"age_scale", Orientation::Vertical, 260}};
  EXPECT_EQ(got, expected);
  EXPECT_FALSE(plan_scale(ui, kAgeScale, scale_burst(), ctx));
}

TEST(PlanScale, GeometryStaysWithinScreen) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> width(200, 600), step(1, 80), init(1, 200), margin(0, 40), height(261, 900);
  std::bernoulli_distribution flagged(0.8);
  for (int round = 0; round < 500; ++round) {
    ContextModel ctx;
    ctx.screen_width = width(rng);
    ctx.screen_height = height(rng);
    ctx.scale_growth_step = step(rng);
    ctx.scale_initial_length = std::min(init(rng), ctx.screen_width);
    ctx.scale_margin = margin(rng);
    ctx.validate();
    UIModel ui = UIModel::demo(ctx);
    for (int i = 0; i < 40; ++i) {
      if (auto d = plan_scale(ui, kAgeScale, scale_burst(flagged(rng) ? Verdict::KO : Verdict::OK), ctx)) {
        ui = apply_directive(ui, *d);
      }
      ASSERT_TRUE(ui.invariants_hold(ctx));
    }
  }
}

TEST(PlanSituation, S1LocksAndAlerts) {
  const auto d = plan_situation({SituationId::S1_UserChanged, 0, {}, true});
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0], AdaptationDirective(Lock{SituationId::S1_UserChanged}));
  EXPECT_EQ(directive_name(d[1]), "alert");
}

TEST(PlanSituation, S2LocksThenChallenges) {
  const auto d = plan_situation({SituationId::S2_BotTakeover, 0, {}, true});
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0], AdaptationDirective(Lock{SituationId::S2_BotTakeover}));
  EXPECT_EQ(d[1], AdaptationDirective(Challenge{"captcha"}));
  EXPECT_EQ(std::get<Alert>(d[2]).level, AlertLevel::Critical);
}

TEST(PlanSituation, PerfFailureEchoesSafeDefault) {
  const Situation s{SituationId::PerfFailure, 0, {}, true};
  const auto none = plan_situation(s, SafeDefault::None);
  ASSERT_EQ(none.size(), 1u);
  EXPECT_EQ(std::get<Alert>(none[0]).level, AlertLevel::Warning);
  const auto lock = plan_situation(s, SafeDefault::Lock);
  ASSERT_EQ(lock.size(), 2u);
  EXPECT_EQ(lock[1], AdaptationDirective(Lock{SituationId::PerfFailure}));
}

UIModel with_counts(const std::vector<std::int64_t>& counts, const std::vector<std::int64_t>& last = {}) {
  UIModel ui;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    ui.widgets.push_back({"w" + std::to_string(i + 1), Orientation::Horizontal, 50, counts[i],
                          last.empty() ? 0 : last[i], true});
  }
  return ui;
}

std::string brute_force_winner(const UIModel& ui) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < ui.widgets.size(); ++i) {
    const auto& a = ui.widgets[i];
    const auto& b = ui.widgets[best];
    if (std::tie(a.usage_count, a.last_used) > std::tie(b.usage_count, b.last_used)) best = i;
  }
  return ui.widgets[best].id;
}

TEST(PlanPaging, WinnerIsArgmax) {
  EXPECT_EQ(plan_paging(with_counts({5, 2, 9}), PagingPolicy::WinnerTakesAll, {}), AdaptationDirective(Page{"w3"}));
}

TEST(PlanPaging, TieBrokenByRecency) {
  EXPECT_EQ(plan_paging(with_counts({4, 4}, {100, 200}), PagingPolicy::WinnerTakesAll, {}),
            AdaptationDirective(Page{"w2"}));
  EXPECT_EQ(plan_paging(with_counts({4, 4}, {200, 200}), PagingPolicy::WinnerTakesAll, {}),
            AdaptationDirective(Page{"w1"}));
}

TEST(PlanPaging, AlreadyPagedToWinnerIsNoop) {
  UIModel ui = apply_directive(with_counts({5, 2, 9}), Page{"w3"});
  EXPECT_FALSE(plan_paging(ui, PagingPolicy::WinnerTakesAll, {}));
}

TEST(PlanPaging, ArgmaxInvariantUnderScaling) {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<std::int64_t> count(0, 6), last(0, 5), factor(1, 9);
  std::uniform_int_distribution<int> n(1, 7);
  for (int round = 0; round < 2000; ++round) {
    std::vector<std::int64_t> c, l;
    const int k = n(rng);
    for (int i = 0; i < k; ++i) {
      c.push_back(count(rng));
      l.push_back(last(rng));
    }
    const UIModel ui = with_counts(c, l);
    const auto page = plan_paging(ui, PagingPolicy::WinnerTakesAll, {});
    ASSERT_TRUE(page);
    ASSERT_EQ(std::get<Page>(*page).winner, brute_force_winner(ui));
    const std::int64_t f = factor(rng);
    for (auto& x : c) x *= f;
    ASSERT_EQ(plan_paging(with_counts(c, l), PagingPolicy::WinnerTakesAll, {}), page);
  }
}

TEST(PlanPaging, LfuEvictsLeastUsedWhenOverflowing) {
  ContextModel ctx;
  UIModel ui = with_counts({5, 1, 3});
  for (auto& w : ui.widgets) w.length = 200;
  EXPECT_EQ(plan_paging(ui, PagingPolicy::LfuEvict, ctx), AdaptationDirective(Hide{"w2"}));
  ui = apply_directive(ui, Hide{"w2"});
  EXPECT_FALSE(plan_paging(ui, PagingPolicy::LfuEvict, ctx));
  EXPECT_FALSE(plan_paging(UIModel::demo(ctx), PagingPolicy::LfuEvict, ctx));
}

TEST(Restore, ShowsEverythingAndKeepsCounts) {
  UIModel ui = with_counts({5, 2, 9});
  ui = apply_directive(ui, *plan_paging(ui, PagingPolicy::WinnerTakesAll, {}));
  ASSERT_EQ(ui.paged_to, "w3");
  EXPECT_TRUE(ui.invariants_hold({}));
  const AdaptationDirective r = restore(ui);
  EXPECT_EQ(r, AdaptationDirective(Restore{}));
  ui = apply_directive(ui, r);
  EXPECT_FALSE(ui.paged_to);
  for (const auto& w : ui.widgets) EXPECT_TRUE(w.visible);
  EXPECT_EQ(plan_paging(ui, PagingPolicy::WinnerTakesAll, {}), AdaptationDirective(Page{"w3"}));
}

TEST(Restore, RequiresPagedUi) {
  try {
    restore(with_counts({1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPaged);
  }
}

TEST(Describe, ProtocolForms) {
  EXPECT_EQ(describe(Reorient{"age_scale", Orientation::Vertical, 260}),
            "reorient widget=age_scale orientation=vertical length=260");
  EXPECT_EQ(describe(Lock{SituationId::S1_UserChanged}), "lock reason=S1_UserChanged");
  EXPECT_EQ(describe(Restore{}), "restore");
  EXPECT_EQ(describe(Resize{"age_scale", 220}), "resize widget=age_scale length=220");
}

TEST(ContextModel, HeightMustExceed260) {
  ContextModel ctx;
  ctx.screen_height = 260;
  EXPECT_THROW(ctx.validate(), Error);
}

}  // namespace
}  // namespace icode

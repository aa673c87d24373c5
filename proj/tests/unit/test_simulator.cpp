#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "fragsim/analytic.hpp"
#include "fragsim/errors.hpp"
#include "fragsim/rng.hpp"
#include "fragsim/simulator.hpp"

using namespace fragsim;

namespace {

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) {
      old_ = old;
      had_ = true;
    }
    setenv(name, value, 1);
  }
  ~ScopedEnv() {
    if (had_) {
      setenv(name_, old_.c_str(), 1);
    } else {
      unsetenv(name_);
    }
  }

 private:
  const char* name_;
  std::string old_;
  bool had_ = false;
};

}  // namespace

TEST(Seeding, MixingFunctionIsPinned) {
  EXPECT_EQ(avalanche64(0), 0u);
  EXPECT_EQ(derive_stream_seed({42, 0}), 0x4579b960bb007f46ULL);
  EXPECT_EQ(derive_stream_seed({42, 1}), 0xa9cb101be2f6824fULL);
  EXPECT_EQ(derive_stream_seed({0, 0}), 0x48218226ff3cd4bfULL);
}

TEST(Seeding, StreamsDiffer) {
  Rng a(SeedSpec{7, 0});
  Rng b(SeedSpec{7, 1});
  EXPECT_NE(a.engine()(), b.engine()());
}

TEST(Rng, UniformAndExponentialRanges) {
  Rng rng(SeedSpec{1, 2});
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double e = rng.exponential();
    ASSERT_GE(e, 0.0);
    sum += e;
  }
  EXPECT_NEAR(sum / 100000, 1.0, 0.015);
}

TEST(Budget, EnvironmentOverride) {
  {
    ScopedEnv env("FRAGSIM_BUDGET_BYTES", "4096");
    EXPECT_EQ(memory_budget_bytes(), 4096u);
  }
  {
    ScopedEnv env("FRAGSIM_BUDGET_BYTES", "lots");
    EXPECT_THROW(memory_budget_bytes(), ConfigError);
  }
}

TEST(Budget, FrameCheckStatesRequiredBytes) {
  const ModelParams p(2, 1.0);
  EXPECT_EQ(require_frame_budget(p, 10, 1 << 20), 8u * 1024u);
  try {
    require_frame_budget(p, 20, 1024);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.required_bytes(), 8u << 20);
    EXPECT_EQ(e.budget_bytes(), 1024u);
  }
  EXPECT_FALSE(checked_power(2, 64).has_value());
  EXPECT_EQ(*checked_power(3, 4), 81u);
  EXPECT_THROW(require_frame_budget(p, 70, ~0ULL), BudgetExceeded);
}

TEST(FrameSampler, ChildrenInheritScaledParent) {
  const ModelParams p(3, 0.7);
  Rng rng(SeedSpec{5, 0});
  FrameSampler sampler(p, 6, rng);
  std::vector<double> parent(sampler.values().begin(), sampler.values().end());
  while (sampler.generation() < 6) {
    sampler.advance();
    const auto child = sampler.values();
    ASSERT_EQ(child.size(), parent.size() * 3);
    for (std::size_t i = 0; i < child.size(); ++i) {
      ASSERT_GT(child[i], 0.0);
      ASSERT_GT(child[i] - p.q() * parent[i / 3], 0.0);
    }
    parent.assign(child.begin(), child.end());
  }
  EXPECT_THROW(sampler.advance(), std::out_of_range);
}

TEST(BrwSweep, RootOnly) {
  const ModelParams p(2, 1.0);
  const auto sweep = brw_sweep(p, 0, SeedSpec{9, 3});
  ASSERT_EQ(sweep.size(), 1u);
  EXPECT_EQ(sweep[0].k_min, sweep[0].k_max);
  EXPECT_EQ(sweep[0].tau, sweep[0].k_max);
  Rng rng(SeedSpec{9, 3});
  EXPECT_EQ(sweep[0].k_max, rng.exponential());
}

TEST(BrwSweep, SummariesAreConsistent) {
  const ModelParams p(2, 1.0);
  const auto sweep = brw_sweep(p, 12, SeedSpec{1, 1}, -1.5);
  ASSERT_EQ(sweep.size(), 13u);
  for (const auto& g : sweep) {
    EXPECT_LE(g.k_min, g.k_max);
    EXPECT_EQ(g.tau, g.k_max - p.gamma() * g.n);
    EXPECT_TRUE(std::is_sorted(g.points_above.rbegin(), g.points_above.rend()));
    for (const double j : g.points_above) {
      EXPECT_GE(j, -1.5);
    }
    if (!g.points_above.empty()) {
      EXPECT_EQ(g.points_above.front(), g.tau);
    }
  }
}

TEST(BrwSweep, Deterministic) {
  const ModelParams p(2, 1.0);
  const auto a = brw_sweep(p, 10, SeedSpec{3, 4});
  const auto b = brw_sweep(p, 10, SeedSpec{3, 4});
  for (std::size_t n = 0; n < a.size(); ++n) {
    EXPECT_EQ(a[n].k_min, b[n].k_min);
    EXPECT_EQ(a[n].points_above, b[n].points_above);
  }
}

TEST(KminKmaxSweep, IndependentOfJobs) {
  const ModelParams p(2, 1.0);
  const auto one = kmin_kmax_sweep(p, 8, 20, 77, 1);
  const auto many = kmin_kmax_sweep(p, 8, 20, 77, 6);
  ASSERT_EQ(one.size(), 20u * 9u);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].replica, many[i].replica);
    EXPECT_EQ(one[i].n, many[i].n);
    EXPECT_EQ(one[i].k_min, many[i].k_min);
    EXPECT_EQ(one[i].k_max, many[i].k_max);
    EXPECT_LE(one[i].k_min, one[i].k_max);
  }
}

TEST(KminKmaxSweep, BudgetSplitAcrossWorkers) {
  ScopedEnv env("FRAGSIM_BUDGET_BYTES", "8192");
  const ModelParams p(2, 1.0);
  EXPECT_NO_THROW(kmin_kmax_sweep(p, 10, 2, 1, 1));
  EXPECT_THROW(kmin_kmax_sweep(p, 10, 2, 1, 2), BudgetExceeded);
}

TEST(Spine, PathShape) {
  const ModelParams p(2, 1.0);
  const auto path = spine_sample(p, 12, SeedSpec{2, 0});
  ASSERT_EQ(path.split_times.size(), 13u);
  for (std::size_t i = 1; i < path.split_times.size(); ++i) {
    EXPECT_GT(path.split_times[i], path.split_times[i - 1]);
  }
  EXPECT_EQ(spine_sample(p, 0, SeedSpec{2, 0}).split_times.size(), 1u);
  EXPECT_THROW(spine_sample(p, -1, SeedSpec{}), std::domain_error);
}

TEST(Spine, MeanOfSn) {
  const ModelParams p(2, 1.0);
  constexpr int n = 10;
  constexpr int replicas = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int r = 0; r < replicas; ++r) {
    const double s = spine_sample(p, n, SeedSpec{11, static_cast<std::uint64_t>(r)}).split_times.back();
    sum += s;
    sum_sq += s * s;
  }
  const double mean = sum / replicas;
  const double se = std::sqrt((sum_sq / replicas - mean * mean) / replicas);
  const double expected = std::pow(2.0, n + 1) - 1.0;
  EXPECT_LT(std::abs(mean - expected), 3.0 * se);
}

TEST(Spine, SurvivalOfSnMatchesSeries) {
  const ModelParams p(2, 1.0);
  constexpr int n = 5;
  constexpr int replicas = 100000;
  const auto samples = spine_kn_samples(p, n, replicas, SeedSpec{12, 0});
  for (const double t : {32.0, 64.0}) {
    const double exact = analytic::survival_Sn(p, n, t).value;
    const double hits = std::count_if(samples.begin(), samples.end(),
                                      [&](double k) { return k * 32.0 > t; });
    const double se = std::sqrt(exact * (1 - exact) / replicas);
    EXPECT_LT(std::abs(hits / replicas - exact), 3.0 * se) << "t=" << t;
  }
}

TEST(Gillespie, InitialState) {
  const ModelParams p(2, 1.0);
  GillespieEngine engine(p, SeedSpec{1, 0});
  EXPECT_EQ(engine.census().counts[0], 1u);
  EXPECT_EQ(engine.min_depth(), 0);
  EXPECT_EQ(engine.max_depth(), 0);
  EXPECT_TRUE(engine.census().mass_conserved(2));
}

TEST(Gillespie, FirstSplitIsStandardExponential) {
  const ModelParams p(3, 0.5);
  constexpr int replicas = 20000;
  double sum = 0.0;
  for (int r = 0; r < replicas; ++r) {
    GillespieEngine engine(p, SeedSpec{4, static_cast<std::uint64_t>(r)});
    ASSERT_TRUE(engine.step(1e9));
    sum += engine.census().time;
  }
  EXPECT_NEAR(sum / replicas, 1.0, 3.0 / std::sqrt(replicas));
}

TEST(Gillespie, MassConservedAtEveryEvent) {
  for (const int k : {2, 3, 5}) {
    const ModelParams p(k, 1.0);
    GillespieEngine engine(p, SeedSpec{8, static_cast<std::uint64_t>(k)});
    for (int i = 0; i < 3000 && engine.step(1e6); ++i) {
      ASSERT_TRUE(engine.census().mass_conserved(k));
      ASSERT_LE(engine.min_depth(), engine.max_depth());
      ASSERT_EQ(engine.census().min_depth(), engine.min_depth());
      ASSERT_EQ(engine.census().max_depth(), engine.max_depth());
    }
  }
}

TEST(Gillespie, TrajectoryStepFunctions) {
  const ModelParams p(2, 1.0);
  const auto traj = gillespie_run(p, 60.0, SeedSpec{6, 0});
  ASSERT_FALSE(traj.jumps.empty());
  EXPECT_EQ(traj.jumps.front().time, 0.0);
  EXPECT_EQ(traj.m_at(0.0), 0);
  EXPECT_EQ(traj.M_at(0.0), 0);
  for (std::size_t i = 1; i < traj.jumps.size(); ++i) {
    const auto& j = traj.jumps[i];
    EXPECT_GE(j.time, traj.jumps[i - 1].time);
    EXPECT_GE(j.m, traj.jumps[i - 1].m);
    EXPECT_GE(j.M, traj.jumps[i - 1].M);
    EXPECT_EQ(traj.m_at(j.time), j.m);
    EXPECT_EQ(traj.M_at(j.time), j.M);
  }
  EXPECT_EQ(traj.census.time, 60.0);
  EXPECT_TRUE(traj.census.mass_conserved(2));
  EXPECT_EQ(traj.m_at(60.0), traj.census.min_depth());
}

TEST(Gillespie, Deterministic) {
  const ModelParams p(2, 1.0);
  const auto a = gillespie_run(p, 200.0, SeedSpec{9, 9});
  const auto b = gillespie_run(p, 200.0, SeedSpec{9, 9});
  EXPECT_EQ(a.events, b.events);
  ASSERT_EQ(a.jumps.size(), b.jumps.size());
  for (std::size_t i = 0; i < a.jumps.size(); ++i) {
    EXPECT_EQ(a.jumps[i].time, b.jumps[i].time);
  }
}

TEST(Gillespie, BudgetCheckedUpFront) {
  const ModelParams p(2, 1.0);
  EXPECT_THROW(gillespie_run(p, 1e6, SeedSpec{}, 1024), BudgetExceeded);
}

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fragsim/errors.hpp"
#include "fragsim/predictors.hpp"
#include "fragsim/simulator.hpp"

namespace fragsim {
namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

int DepthCensus::min_depth() const {
  for (std::size_t d = 0; d < counts.size(); ++d) {
    if (counts[d] > 0) {
      return static_cast<int>(d);
    }
  }
  return -1;
}

int DepthCensus::max_depth() const {
  for (std::size_t d = counts.size(); d-- > 0;) {
    if (counts[d] > 0) {
      return static_cast<int>(d);
    }
  }
  return -1;
}

bool DepthCensus::mass_conserved(int k) const {
  // Carry counts upward from the deepest level: k fragments at depth d make
  // one at depth d-1. Mass is exactly one iff every carry divides evenly and
  // a single unit arrives at depth 0.
  const int deepest = max_depth();
  if (deepest < 0) {
    return false;
  }
  const std::uint64_t base = static_cast<std::uint64_t>(k);
  std::uint64_t carry = 0;
  for (int d = deepest; d >= 1; --d) {
    carry += counts[d];
    if (carry % base != 0) {
      return false;
    }
    carry /= base;
  }
  return carry + counts[0] == 1;
}

namespace {
int step_value_at(const std::vector<ExtremeJump>& jumps, double t, bool smallest_depth) {
  if (jumps.empty()) {
    throw std::logic_error("empty trajectory");
  }
  auto it = std::upper_bound(jumps.begin(), jumps.end(), t,
                             [](double value, const ExtremeJump& j) { return value < j.time; });
  if (it == jumps.begin()) {
    return smallest_depth ? jumps.front().m : jumps.front().M;
  }
  --it;
  return smallest_depth ? it->m : it->M;
}
}  // namespace

int GillespieTrajectory::m_at(double t) const { return step_value_at(jumps, t, true); }
int GillespieTrajectory::M_at(double t) const { return step_value_at(jumps, t, false); }

GillespieEngine::GillespieEngine(const ModelParams& params, const SeedSpec& seed)
    : params_(params), rng_(seed) {
  grow_to(2);
  census_.counts[0] = 1;
  census_.first_seen[0] = 0.0;
}

void GillespieEngine::grow_to(std::size_t depth) {
  while (census_.counts.size() < depth) {
    const std::size_t d = census_.counts.size();
    census_.counts.push_back(0);
    census_.first_seen.push_back(kNaN);
    census_.last_seen.push_back(kNaN);
    depth_rate_.push_back(std::exp(-static_cast<double>(d) * params_.log_inv_q()));
  }
}

bool GillespieEngine::step(double t_end) {
  double total_rate = 0.0;
  for (int d = min_depth_; d <= max_depth_; ++d) {
    total_rate += static_cast<double>(census_.counts[d]) * depth_rate_[d];
  }
  const double wait = rng_.exponential() / total_rate;
  if (census_.time + wait > t_end) {
    census_.time = t_end;
    return false;
  }
  census_.time += wait;

  // Pick a depth with probability proportional to counts[d] q^d.
  const double target = rng_.uniform() * total_rate;
  double cumulative = 0.0;
  int chosen = max_depth_;
  for (int d = min_depth_; d <= max_depth_; ++d) {
    if (census_.counts[d] == 0) {
      continue;
    }
    cumulative += static_cast<double>(census_.counts[d]) * depth_rate_[d];
    if (target < cumulative) {
      chosen = d;
      break;
    }
  }
  // Rounding can leave `target` just above the final cumulative sum; the
  // fallback is the deepest populated level.
  while (census_.counts[chosen] == 0) {
    --chosen;
  }

  grow_to(static_cast<std::size_t>(chosen) + 2);
  census_.counts[chosen] -= 1;
  if (census_.counts[chosen + 1] == 0 && std::isnan(census_.first_seen[chosen + 1])) {
    census_.first_seen[chosen + 1] = census_.time;
  }
  census_.counts[chosen + 1] += static_cast<std::uint64_t>(params_.k());
  if (census_.counts[chosen] == 0) {
    census_.last_seen[chosen] = census_.time;
  }
  max_depth_ = std::max(max_depth_, chosen + 1);
  while (census_.counts[min_depth_] == 0) {
    ++min_depth_;
  }
  ++events_;
  return true;
}

double projected_events(const ModelParams& params, double t_end) {
  const double depth =
      t_end > std::exp(1.0) ? std::max(predictors::h_of_t(params, t_end), 1.0) : 1.0;
  return std::pow(static_cast<double>(params.k()), std::ceil(depth) + 1.0);
}

GillespieTrajectory gillespie_run(const ModelParams& params, double t_end, const SeedSpec& seed,
                                  std::uint64_t budget) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw std::domain_error("t_end must be a finite non-negative time");
  }
  const double projected_bytes = projected_events(params, t_end) * 8.0;
  if (projected_bytes > static_cast<double>(budget)) {
    const auto required = projected_bytes >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max()
                                                    : static_cast<std::uint64_t>(projected_bytes);
    throw BudgetExceeded(required, budget,
                         "event-driven run to t_end=" + std::to_string(t_end));
  }

  GillespieEngine engine(params, seed);
  GillespieTrajectory trajectory;
  trajectory.t_end = t_end;
  trajectory.jumps.push_back({0.0, 0, 0});
  while (engine.step(t_end)) {
    const int m = engine.min_depth();
    const int big_m = engine.max_depth();
    const auto& last = trajectory.jumps.back();
    if (m != last.m || big_m != last.M) {
      trajectory.jumps.push_back({engine.census().time, m, big_m});
    }
  }
  trajectory.events = engine.events();
  trajectory.census = engine.census();
  return trajectory;
}

}  // namespace fragsim

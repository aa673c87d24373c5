#include "fragsim/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fragsim/analytic.hpp"
#include "fragsim/predictors.hpp"

namespace fragsim::stats {

void RunningMoments::add(double x) noexcept {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningMoments::merge(const RunningMoments& other) noexcept {
  if (other.count_ == 0) {
    return;
  }
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double delta = other.mean_ - mean_;
  const double total = na + nb;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  count_ += other.count_;
}

double RunningMoments::variance() const noexcept {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double RunningMoments::std_error() const noexcept {
  return count_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

Proportion proportion(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0) {
    throw std::invalid_argument("proportion needs at least one trial");
  }
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
}

KSReport ks_gumbel(std::span<const double> samples, double q) {
  if (samples.size() < kMinKsSamples) {
    throw std::invalid_argument("ks_gumbel needs at least " + std::to_string(kMinKsSamples) +
                                " samples, got " + std::to_string(samples.size()));
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double euler = analytic::phi_inf(q);
  const double n = static_cast<double>(sorted.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = std::exp(-std::exp(-sorted[i]) / euler);
    const double above = static_cast<double>(i + 1) / n - cdf;
    const double below = cdf - static_cast<double>(i) / n;
    sup = std::max({sup, above, below});
  }
  KSReport report;
  report.statistic = std::clamp(sup, 0.0, 1.0);
  report.sample_size = sorted.size();
  report.reference = "gumbel exp(-e^-s/phi_inf(q)), q=" + std::to_string(q);
  return report;
}

double limit_intensity_mass(double q, const Interval& interval) {
  const double upper = std::isinf(interval.hi) ? 0.0 : std::exp(-interval.hi);
  return (std::exp(-interval.lo) - upper) / analytic::phi_inf(q);
}

std::vector<IntervalCountReport> intensity_profile(
    const std::vector<std::vector<double>>& point_samples, const std::vector<Interval>& grid,
    double q) {
  if (point_samples.empty()) {
    throw std::invalid_argument("intensity_profile needs at least one replica");
  }
  std::vector<IntervalCountReport> reports;
  reports.reserve(grid.size());
  for (const auto& interval : grid) {
    RunningMoments moments;
    for (const auto& replica : point_samples) {
      const auto count = std::count_if(replica.begin(), replica.end(), [&](double x) {
        return x >= interval.lo && x < interval.hi;
      });
      moments.add(static_cast<double>(count));
    }
    IntervalCountReport report;
    report.interval = interval;
    report.mean_count = moments.mean();
    report.var_count = moments.variance();
    report.expected = limit_intensity_mass(q, interval);
    report.std_error = moments.std_error();
    report.poisson_dispersion =
        report.mean_count > 0.0 ? std::abs(report.var_count / report.mean_count - 1.0) : 0.0;
    reports.push_back(report);
  }
  return reports;
}

double ordered_distinct_exceedances(std::span<const double> points,
                                    std::span<const double> thresholds) {
  std::vector<double> sorted_thresholds(thresholds.begin(), thresholds.end());
  std::sort(sorted_thresholds.begin(), sorted_thresholds.end(), std::greater<>());
  double product = 1.0;
  for (std::size_t j = 0; j < sorted_thresholds.size(); ++j) {
    const auto above = std::count_if(points.begin(), points.end(),
                                     [&](double x) { return x > sorted_thresholds[j]; });
    const auto free = static_cast<double>(above) - static_cast<double>(j);
    if (free <= 0.0) {
      return 0.0;
    }
    product *= free;
  }
  return product;
}

FactorialMomentReport factorial_moment_bruteforce(
    const ModelParams& params, int n, const std::vector<std::vector<double>>& thresholds,
    std::uint64_t replicas, std::uint64_t master_seed) {
  if (n < 0) {
    throw std::domain_error("n must be non-negative");
  }
  if (replicas == 0) {
    throw std::invalid_argument("factorial_moment_bruteforce needs replicas >= 1");
  }
  const int generations = std::max<int>(1, static_cast<int>(thresholds.size()));
  const auto size = checked_power(static_cast<std::uint64_t>(params.k()), n + generations);
  if (!size || *size > 4096) {
    throw std::invalid_argument("factorial_moment_bruteforce: k^(n+l) must not exceed 4096");
  }

  double limit = 1.0;
  const double euler = analytic::phi_inf(params.q());
  for (const auto& row : thresholds) {
    for (const double t : row) {
      limit *= std::exp(-t) / euler;
    }
  }

  const int last = n + generations - 1;
  RunningMoments moments;
  std::vector<double> jvalues;
  for (std::uint64_t r = 0; r < replicas; ++r) {
    Rng rng(SeedSpec{master_seed, r});
    FrameSampler sampler(params, last, rng);
    double product = 1.0;
    for (;;) {
      const int g = sampler.generation();
      if (g >= n && static_cast<std::size_t>(g - n) < thresholds.size()) {
        const auto frame = sampler.values();
        const double shift = params.gamma() * g;
        jvalues.assign(frame.begin(), frame.end());
        for (double& x : jvalues) {
          x -= shift;
        }
        product *= ordered_distinct_exceedances(jvalues, thresholds[g - n]);
      }
      if (g == last) {
        break;
      }
      sampler.advance();
    }
    moments.add(product);
  }
  return {moments.mean(), moments.std_error(), limit, replicas};
}

std::vector<double> geometric_probes(double t_end, double burn_in_fraction, double ratio) {
  if (!(burn_in_fraction > 0.0 && burn_in_fraction < 1.0)) {
    throw std::domain_error("burn-in fraction must lie in (0,1)");
  }
  if (!(ratio > 1.0)) {
    throw std::domain_error("probe ratio must exceed 1");
  }
  const double start = burn_in_fraction * t_end;
  if (!(start > std::numbers::e)) {
    throw std::domain_error("horizon too short: burn-in ends at t=" + std::to_string(start) +
                            ", predictors need t > e");
  }
  std::vector<double> probes;
  for (double t = start; t <= t_end; t *= ratio) {
    probes.push_back(t);
  }
  return probes;
}

namespace {
CoverageReport coverage_of(const GillespieTrajectory& trajectory, const ModelParams& params,
                           double burn_in_fraction, double ratio, bool smallest) {
  const auto probes = geometric_probes(trajectory.t_end, burn_in_fraction, ratio);
  CoverageReport report;
  for (const double t : probes) {
    const auto window =
        smallest ? predictors::M_window(params, t) : predictors::m_window(params, t);
    const int value = smallest ? trajectory.M_at(t) : trajectory.m_at(t);
    ++report.probes;
    if (window.contains(value)) {
      ++report.hits;
    }
  }
  report.rate = report.probes ? static_cast<double>(report.hits) / report.probes : 0.0;
  return report;
}
}  // namespace

CoverageReport coverage_m(const GillespieTrajectory& trajectory, const ModelParams& params,
                          double burn_in_fraction, double ratio) {
  return coverage_of(trajectory, params, burn_in_fraction, ratio, false);
}

CoverageReport coverage_M(const GillespieTrajectory& trajectory, const ModelParams& params,
                          double burn_in_fraction, double ratio) {
  return coverage_of(trajectory, params, burn_in_fraction, ratio, true);
}

CoverageReport merge(std::span<const CoverageReport> reports) {
  CoverageReport total;
  for (const auto& r : reports) {
    total.probes += r.probes;
    total.hits += r.hits;
  }
  total.rate = total.probes ? static_cast<double>(total.hits) / total.probes : 0.0;
  return total;
}

CoverageReport min_concentration(std::span<const ExtremeRecord> records,
                                 const ModelParams& params, double slack, int min_n) {
  CoverageReport report;
  for (const auto& record : records) {
    if (record.n < std::max(min_n, 1)) {
      continue;
    }
    const double center = predictors::w_n(params, record.n);
    const double half = std::pow(static_cast<double>(record.n), -1.0 / 3.0) + slack;
    const double value = -std::log(record.k_min);
    ++report.probes;
    if (value >= center - half && value <= center + half) {
      ++report.hits;
    }
  }
  report.rate = report.probes ? static_cast<double>(report.hits) / report.probes : 0.0;
  return report;
}

CorrelationReport count_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("paired samples must have equal length");
  }
  if (a.size() < 2) {
    throw std::invalid_argument("correlation needs at least two replicas");
  }
  RunningMoments ma;
  RunningMoments mb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma.add(a[i]);
    mb.add(b[i]);
  }
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma.mean()) * (b[i] - mb.mean());
  }
  cov /= static_cast<double>(a.size() - 1);
  const double denom = std::sqrt(ma.variance() * mb.variance());
  CorrelationReport report;
  report.replicas = a.size();
  report.correlation = denom > 0.0 ? std::clamp(cov / denom, -1.0, 1.0) : 0.0;
  const double dof = std::max<double>(1.0, static_cast<double>(a.size()) - 2.0);
  report.std_error = std::sqrt((1.0 - report.correlation * report.correlation) / dof);
  return report;
}

CorrelationReport neighbor_independence(const std::vector<std::vector<double>>& generation_n,
                                        const std::vector<std::vector<double>>& generation_n1,
                                        double threshold) {
  if (generation_n.size() != generation_n1.size()) {
    throw std::invalid_argument("generations must come from the same replicas");
  }
  auto counts = [threshold](const std::vector<std::vector<double>>& gen) {
    std::vector<double> out;
    out.reserve(gen.size());
    for (const auto& replica : gen) {
      out.push_back(static_cast<double>(std::count_if(
          replica.begin(), replica.end(), [&](double x) { return x >= threshold; })));
    }
    return out;
  };
  const auto a = counts(generation_n);
  const auto b = counts(generation_n1);
  return count_correlation(a, b);
}

}  // namespace fragsim::stats

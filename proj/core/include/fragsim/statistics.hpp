#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fragsim/model_params.hpp"
#include "fragsim/rng.hpp"
#include "fragsim/simulator.hpp"

/// Turns simulator output into quantitative checks of the limit theorems.
/// Every report is a pure function of its inputs.
namespace fragsim::stats {

/// One-pass mean/variance accumulator (Welford) with Chan's parallel merge.
class RunningMoments {
 public:
  void add(double x) noexcept;
  void merge(const RunningMoments& other) noexcept;

  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const noexcept;
  double std_error() const noexcept;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Binomial proportion with its standard error.
struct Proportion {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};
Proportion proportion(std::uint64_t hits, std::uint64_t trials);

struct KSReport {
  double statistic = 0.0;
  std::uint64_t sample_size = 0;
  std::string reference;
};

inline constexpr std::size_t kMinKsSamples = 100;

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and
/// the Gumbel limit exp(-e^{-s}/phi_inf(q)). Needs >= 100 samples.
KSReport ks_gumbel(std::span<const double> samples, double q);

struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};

struct IntervalCountReport {
  Interval interval;
  double mean_count = 0.0;
  double var_count = 0.0;
  /// Poisson mean: integral of e^{-s}/phi_inf(q) over the interval.
  double expected = 0.0;
  /// |var/mean - 1|; a Poisson count has dispersion index 1.
  double poisson_dispersion = 0.0;
  double std_error = 0.0;
};

/// Expected number of limit points in [lo, hi): (e^{-lo} - e^{-hi}) / phi_inf(q).
double limit_intensity_mass(double q, const Interval& interval);

/// Per-interval count statistics across replicas. Each inner vector holds
/// the J values of one replica.
std::vector<IntervalCountReport> intensity_profile(
    const std::vector<std::vector<double>>& point_samples, const std::vector<Interval>& grid,
    double q);

/// Number of ordered tuples of distinct points (x_1..x_p) with x_j > t_j.
/// Sets {x > t} are nested, so this is prod_j (c_(j) - (j-1)) with c_(j) the
/// count above the j-th largest threshold.
double ordered_distinct_exceedances(std::span<const double> points,
                                    std::span<const double> thresholds);

struct FactorialMomentReport {
  double estimate = 0.0;
  double std_error = 0.0;
  /// prod_{i,j} e^{-t_ij} / phi_inf(q)
  double limit = 0.0;
  std::uint64_t replicas = 0;
};

/// Monte Carlo estimate of E[prod_i N_{n+i}^{[p_i]}(prod_j [t_ij, inf))] from
/// full trees; thresholds[i] lists the t_ij for generation n+i. Requires
/// k^{n + thresholds.size()} <= 4096.
FactorialMomentReport factorial_moment_bruteforce(
    const ModelParams& params, int n, const std::vector<std::vector<double>>& thresholds,
    std::uint64_t replicas, std::uint64_t master_seed);

struct CoverageReport {
  std::uint64_t probes = 0;
  std::uint64_t hits = 0;
  double rate = 0.0;
};

inline constexpr double kDefaultBurnIn = 0.1;
inline constexpr double kDefaultProbeRatio = 1.05;

/// Geometric probe times t_0 r^j in [burn_in * t_end, t_end].
std::vector<double> geometric_probes(double t_end, double burn_in_fraction, double ratio);

/// Fraction of probe times where m_t (resp. M_t) lies in its predictor window.
CoverageReport coverage_m(const GillespieTrajectory& trajectory, const ModelParams& params,
                          double burn_in_fraction = kDefaultBurnIn,
                          double ratio = kDefaultProbeRatio);
CoverageReport coverage_M(const GillespieTrajectory& trajectory, const ModelParams& params,
                          double burn_in_fraction = kDefaultBurnIn,
                          double ratio = kDefaultProbeRatio);
CoverageReport merge(std::span<const CoverageReport> reports);

inline constexpr double kDefaultMinSlack = 0.5;

/// Fraction of records (n >= min_n) with -log K_n^min inside
/// [w_n - n^{-1/3} - slack, w_n + n^{-1/3} + slack].
CoverageReport min_concentration(std::span<const ExtremeRecord> records,
                                 const ModelParams& params, double slack = kDefaultMinSlack,
                                 int min_n = 2);

struct CorrelationReport {
  double correlation = 0.0;
  double std_error = 0.0;
  std::uint64_t replicas = 0;
};

/// Pearson correlation of paired counts across replicas.
CorrelationReport count_correlation(std::span<const double> a, std::span<const double> b);

/// Correlation of N_n([threshold, inf)) and N_{n+1}([threshold, inf)) across
/// replicas; each inner vector holds one replica's J values.
CorrelationReport neighbor_independence(const std::vector<std::vector<double>>& generation_n,
                                        const std::vector<std::vector<double>>& generation_n1,
                                        double threshold = 0.0);

}  // namespace fragsim::stats

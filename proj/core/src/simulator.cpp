#include "fragsim/simulator.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "fragsim/errors.hpp"
#include "fragsim/parallel.hpp"

namespace fragsim {

std::uint64_t memory_budget_bytes() {
  const char* raw = std::getenv("FRAGSIM_BUDGET_BYTES");
  if (raw == nullptr || *raw == '\0') {
    return kDefaultBudgetBytes;
  }
  char* end = nullptr;
  errno = 0;
  const unsigned long long parsed = std::strtoull(raw, &end, 10);
  if (errno != 0 || end == raw || *end != '\0' || parsed == 0) {
    throw ConfigError("FRAGSIM_BUDGET_BYTES", "expected a positive integer, got '" +
                                                  std::string(raw) + "'");
  }
  return parsed;
}

std::optional<std::uint64_t> checked_power(std::uint64_t k, int n) {
  if (n < 0) {
    return std::nullopt;
  }
  std::uint64_t result = 1;
  for (int i = 0; i < n; ++i) {
    if (result > std::numeric_limits<std::uint64_t>::max() / k) {
      return std::nullopt;
    }
    result *= k;
  }
  return result;
}

std::uint64_t require_frame_budget(const ModelParams& params, int n_max, std::uint64_t budget) {
  if (n_max < 0) {
    throw std::domain_error("n_max must be non-negative");
  }
  const std::string what = "generation frame for n_max=" + std::to_string(n_max);
  const auto width = checked_power(static_cast<std::uint64_t>(params.k()), n_max);
  if (!width || *width > std::numeric_limits<std::uint64_t>::max() / sizeof(double)) {
    throw BudgetExceeded(std::numeric_limits<std::uint64_t>::max(), budget, what);
  }
  const std::uint64_t bytes = *width * sizeof(double);
  if (bytes > budget) {
    throw BudgetExceeded(bytes, budget, what);
  }
  return bytes;
}

FrameSampler::FrameSampler(const ModelParams& params, int n_max, Rng& rng, std::uint64_t budget)
    : params_(params), n_max_(n_max), rng_(&rng) {
  const std::uint64_t bytes = require_frame_budget(params, n_max, budget);
  values_.resize(bytes / sizeof(double));
  values_[0] = rng_->exponential();
}

void FrameSampler::advance() {
  if (generation_ >= n_max_) {
    throw std::out_of_range("FrameSampler advanced past n_max");
  }
  const std::size_t k = static_cast<std::size_t>(params_.k());
  const double q = params_.q();
  double* data = values_.data();
  for (std::size_t i = size_; i-- > 0;) {
    const double inherited = q * data[i];
    double* children = data + k * i;
    for (std::size_t c = 0; c < k; ++c) {
      children[c] = inherited + rng_->exponential();
    }
  }
  size_ *= k;
  ++generation_;
}

GenerationSummary summarize_generation(const ModelParams& params, int n,
                                       std::span<const double> frame, double floor) {
  GenerationSummary summary;
  summary.n = n;
  const auto [lo, hi] = std::minmax_element(frame.begin(), frame.end());
  summary.k_min = *lo;
  summary.k_max = *hi;
  const double shift = params.gamma() * n;
  summary.tau = summary.k_max - shift;
  if (summary.tau >= floor) {
    const double threshold = floor + shift;
    for (const double value : frame) {
      if (value >= threshold) {
        summary.points_above.push_back(value - shift);
      }
    }
    std::sort(summary.points_above.begin(), summary.points_above.end(), std::greater<>());
  }
  return summary;
}

std::vector<GenerationSummary> brw_sweep(const ModelParams& params, int n_max,
                                         const SeedSpec& seed, double floor) {
  Rng rng(seed);
  FrameSampler sampler(params, n_max, rng);
  std::vector<GenerationSummary> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  for (;;) {
    out.push_back(summarize_generation(params, sampler.generation(), sampler.values(), floor));
    if (sampler.generation() == n_max) {
      break;
    }
    sampler.advance();
  }
  return out;
}

std::vector<ExtremeRecord> kmin_kmax_sweep(const ModelParams& params, int n_max,
                                           std::uint64_t replicas, std::uint64_t master_seed,
                                           unsigned jobs) {
  const std::uint64_t concurrent = std::max<std::uint64_t>(1, std::min<std::uint64_t>(jobs, replicas));
  require_frame_budget(params, n_max, memory_budget_bytes() / concurrent);
  const double no_points = std::numeric_limits<double>::infinity();
  auto per_replica = run_replicas(replicas, jobs, [&](std::uint64_t r) {
    return brw_sweep(params, n_max, SeedSpec{master_seed, r}, no_points);
  });
  std::vector<ExtremeRecord> records;
  records.reserve(replicas * (static_cast<std::size_t>(n_max) + 1));
  for (std::uint64_t r = 0; r < replicas; ++r) {
    for (const auto& s : per_replica[r]) {
      records.push_back({r, s.n, s.k_min, s.k_max, s.tau});
    }
  }
  return records;
}

SpinePath spine_sample(const ModelParams& params, int n, const SeedSpec& seed) {
  if (n < 0) {
    throw std::domain_error("spine length n must be non-negative");
  }
  Rng rng(seed);
  SpinePath path;
  path.split_times.reserve(static_cast<std::size_t>(n) + 1);
  double scale = 1.0;  // q^-j
  double total = 0.0;
  for (int j = 0; j <= n; ++j) {
    total += scale * rng.exponential();
    path.split_times.push_back(total);
    scale /= params.q();
  }
  return path;
}

std::vector<double> spine_kn_samples(const ModelParams& params, int n, std::uint64_t count,
                                     const SeedSpec& seed) {
  if (n < 0) {
    throw std::domain_error("spine length n must be non-negative");
  }
  Rng rng(seed);
  std::vector<double> samples;
  samples.reserve(count);
  const double qn = std::pow(params.q(), n);
  for (std::uint64_t i = 0; i < count; ++i) {
    double scale = 1.0;
    double total = 0.0;
    for (int j = 0; j <= n; ++j) {
      total += scale * rng.exponential();
      scale /= params.q();
    }
    samples.push_back(qn * total);
  }
  return samples;
}

}  // namespace fragsim

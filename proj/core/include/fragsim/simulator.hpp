#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fragsim/model_params.hpp"
#include "fragsim/rng.hpp"

namespace fragsim {

inline constexpr std::uint64_t kDefaultBudgetBytes = 2ULL << 30;  // 2 GiB
inline constexpr double kDefaultPointFloor = -5.0;

/// Frame memory budget: FRAGSIM_BUDGET_BYTES if set to a positive integer,
/// otherwise 2 GiB.
std::uint64_t memory_budget_bytes();

/// k^n, or nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> checked_power(std::uint64_t k, int n);

/// Bytes needed to stream generations 0..n_max of the walk; throws
/// BudgetExceeded if this is above `budget`.
std::uint64_t require_frame_budget(const ModelParams& params, int n_max, std::uint64_t budget);

/// Streams the rescaled walk K(v) generation by generation, holding only the
/// current frame. Vertex i of generation n has children k*i .. k*i+k-1, each
/// with K(child) = q K(i) + W. Children are drawn in descending parent order
/// (parent k^n - 1 first), child 0 before child k-1, so the update can be done
/// in place.
class FrameSampler {
 public:
  /// Allocates room for generation n_max (checked against the budget) and
  /// draws the root K(root) = W.
  FrameSampler(const ModelParams& params, int n_max, Rng& rng,
               std::uint64_t budget = memory_budget_bytes());

  int generation() const noexcept { return generation_; }
  int max_generation() const noexcept { return n_max_; }
  std::span<const double> values() const noexcept { return {values_.data(), size_}; }

  /// Moves to the next generation. Throws std::out_of_range past n_max.
  void advance();

 private:
  ModelParams params_;
  int n_max_;
  Rng* rng_;
  std::vector<double> values_;
  std::size_t size_ = 1;
  int generation_ = 0;
};

struct GenerationSummary {
  int n = 0;
  double k_min = 0.0;
  double k_max = 0.0;
  /// k_max - gamma n
  double tau = 0.0;
  /// J(v) = K(v) - gamma n for every vertex with J(v) >= floor, descending.
  std::vector<double> points_above;
};

GenerationSummary summarize_generation(const ModelParams& params, int n,
                                       std::span<const double> frame, double floor);

/// One replica of the walk up to generation n_max.
std::vector<GenerationSummary> brw_sweep(const ModelParams& params, int n_max,
                                         const SeedSpec& seed,
                                         double floor = kDefaultPointFloor);

struct ExtremeRecord {
  std::uint64_t replica = 0;
  int n = 0;
  double k_min = 0.0;
  double k_max = 0.0;
  double tau = 0.0;
};

/// brw_sweep over replicas 0..replicas-1 of `master_seed`, flattened in
/// (replica, n) order.
std::vector<ExtremeRecord> kmin_kmax_sweep(const ModelParams& params, int n_max,
                                           std::uint64_t replicas, std::uint64_t master_seed,
                                           unsigned jobs = 1);

/// Split times S_0 < S_1 < ... < S_n of the fragment containing 0.
struct SpinePath {
  std::vector<double> split_times;
};

/// S_i = sum_{j<=i} q^-j W_j.
SpinePath spine_sample(const ModelParams& params, int n, const SeedSpec& seed);

/// `count` independent draws of K_n = q^n S_n from a single stream.
std::vector<double> spine_kn_samples(const ModelParams& params, int n, std::uint64_t count,
                                     const SeedSpec& seed);

// ---------------------------------------------------------------------------
// Event-driven engine on per-depth fragment counts.

/// Depth census of the fragmentation. Depth d holds fragments of size k^-d.
struct DepthCensus {
  double time = 0.0;
  std::vector<std::uint64_t> counts;
  /// First time depth d was populated; NaN if never.
  std::vector<double> first_seen;
  /// Last time depth d became empty; NaN if it never emptied.
  std::vector<double> last_seen;

  /// Smallest populated depth m_t (largest fragment is k^-m_t).
  int min_depth() const;
  /// Largest populated depth M_t.
  int max_depth() const;
  /// sum_d counts[d] k^-d == 1, checked exactly in integer arithmetic.
  bool mass_conserved(int k) const;
};

struct ExtremeJump {
  double time = 0.0;
  int m = 0;
  int M = 0;
};

struct GillespieTrajectory {
  double t_end = 0.0;
  std::uint64_t events = 0;
  /// (0, 0, 0) followed by every change of m_t or M_t.
  std::vector<ExtremeJump> jumps;
  DepthCensus census;

  /// Value of the right-continuous step function m_t (resp. M_t) at t.
  int m_at(double t) const;
  int M_at(double t) const;
};

class GillespieEngine {
 public:
  GillespieEngine(const ModelParams& params, const SeedSpec& seed);

  const DepthCensus& census() const noexcept { return census_; }
  std::uint64_t events() const noexcept { return events_; }
  int min_depth() const noexcept { return min_depth_; }
  int max_depth() const noexcept { return max_depth_; }

  /// Performs the next split if it happens before t_end and returns true;
  /// otherwise advances the clock to t_end and returns false.
  bool step(double t_end);

 private:
  void grow_to(std::size_t depth);

  ModelParams params_;
  Rng rng_;
  DepthCensus census_;
  std::vector<double> depth_rate_;  // q^d
  std::uint64_t events_ = 0;
  int min_depth_ = 0;
  int max_depth_ = 0;
};

/// Projected number of splits up to t_end from the smallest-fragment
/// predictor, k^{ceil h(t_end) + 1}; used for the budget check.
double projected_events(const ModelParams& params, double t_end);

/// Runs one replica to t_end. Each event costs one budget byte-equivalent of
/// 8 bytes; throws BudgetExceeded up front if the projection does not fit.
GillespieTrajectory gillespie_run(const ModelParams& params, double t_end, const SeedSpec& seed,
                                  std::uint64_t budget = memory_budget_bytes());

}  // namespace fragsim

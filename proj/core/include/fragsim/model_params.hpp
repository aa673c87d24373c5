#pragma once

namespace fragsim {

/// Parameters of the k-regular self-similar fragmentation with index alpha.
///
/// The derived constants are
///   q     = k^-alpha      (per-generation rescaling of the walk)
///   gamma = log k
///   kappa = 1 / (gamma * alpha),  so that q = exp(-1/kappa).
class ModelParams {
 public:
  /// Throws std::domain_error if k < 2 or alpha is not a positive finite number.
  ModelParams(int k, double alpha);

  int k() const noexcept { return k_; }
  double alpha() const noexcept { return alpha_; }
  double q() const noexcept { return q_; }
  double gamma() const noexcept { return gamma_; }
  double kappa() const noexcept { return kappa_; }
  /// log(1/q) = 1/kappa
  double log_inv_q() const noexcept { return log_inv_q_; }

  friend bool operator==(const ModelParams& a, const ModelParams& b) noexcept {
    return a.k_ == b.k_ && a.alpha_ == b.alpha_;
  }

 private:
  int k_;
  double alpha_;
  double q_;
  double gamma_;
  double kappa_;
  double log_inv_q_;
};

/// Checks q in (0,1); throws std::domain_error otherwise.
void require_unit_interval_q(double q);

}  // namespace fragsim

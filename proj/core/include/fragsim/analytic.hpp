#pragma once

#include <cstdint>
#include <utility>

#include "fragsim/model_params.hpp"
#include "fragsim/tail_eval.hpp"

/// Exact and asymptotic laws of the rescaled walk K_n = sum_{i<=n} q^i W_i,
/// its limit K_inf, the spine split times S_n and the birth chain X_t.
namespace fragsim::analytic {

inline constexpr double kDefaultSeriesTol = 1e-14;
/// Relative error (w.r.t. the smaller of P and 1-P) above which survival_Kn
/// tries the simplex bracket for the left tail instead.
inline constexpr double kCancellationThreshold = 1e-8;

/// q-Pochhammer symbol prod_{j=1..n} (1 - q^j); 1 for n = 0.
double phi_n(double q, int n);
/// Euler function prod_{j>=1} (1 - q^j), truncated once the remaining
/// factors can change the product by less than `tol` (relative).
double phi_inf(double q, double tol = 1e-16);

/// P(K_n > t) via the alternating q-series, compensated summation.
TailEval survival_Kn(double q, int n, double t);
TailEval survival_Kn(const ModelParams& params, int n, double t);
/// Density of K_n at t.
TailEval density_Kn(double q, int n, double t);
/// P(K_inf > t); the series is cut once q^{j(j+1)/2}/phi_j < tol * phi_inf.
TailEval survival_Kinf(double q, double t, double tol = kDefaultSeriesTol);

/// P(S_n > t) = P(K_n > q^n t); the rescaling is done in log space.
TailEval survival_Sn(const ModelParams& params, int n, double t);
/// P(X_t = n) for the birth chain jumping from i to i+1 at rate q^i.
TailEval occupancy_Xt(const ModelParams& params, int n, double t);

/// P(S_n > t) * phi_n(q) * e^t - 1 computed without forming the survival
/// probability, so it stays accurate when it is far below machine epsilon
/// relative to P. n < 0 means n = infinity.
double tail_envelope_residual(double q, int n, double t);

/// Left-tail rate F_q(s), defined for s in (0, e^-2].
double left_tail_F(const ModelParams& params, double s);

struct SimplexBounds {
  double lower = 0.0;
  double upper = 0.0;
  double log_lower = 0.0;
  double log_upper = 0.0;
};
/// Bracket of P(K_{m-1} <= s) by the volume of the s-scaled m-simplex.
SimplexBounds simplex_bounds(double q, int m, double s);

/// Smallest integer strictly greater than kappa (log 1/s + log log 1/s).
int critical_m(const ModelParams& params, double s);

/// Log-Stirling approximation of log(s^m q^{-m(m-1)/2} / m!) at (x=s, y=m).
double stirling_exponent(double x, double y, double kappa);

/// exp(-e^{-s} / phi_inf(q)): the limit law of the centred maximum tau_n.
double gumbel_limit_cdf(double q, double s);
/// Inverse of gumbel_limit_cdf in s, for p in (0,1).
double gumbel_limit_quantile(double q, double p);
/// Mean of the limit law: -log phi_inf(q) + Euler-Mascheroni.
double gumbel_limit_mean(double q);

}  // namespace fragsim::analytic

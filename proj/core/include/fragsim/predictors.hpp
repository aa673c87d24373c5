#pragma once

#include <utility>
#include <vector>

#include "fragsim/model_params.hpp"

/// Deterministic centres and windows for the depths of the largest (m_t) and
/// smallest (M_t) fragments, plus the root-finders behind them.
namespace fragsim::predictors {

/// Least integer strictly greater than x.
int ceil_strict(double x);

/// Integer window [lo_int, hi_int] built from center +- half_width.
struct PredictorWindow {
  int lo_int = 0;
  int hi_int = 0;
  double center = 0.0;
  double half_width = 0.0;

  static PredictorWindow around(double center, double half_width);
  bool contains(int value) const noexcept { return value >= lo_int && value <= hi_int; }
};

/// kappa (log t - log log t - log(gamma kappa)); needs t > e.
double g_of_t(const ModelParams& params, double t);
/// kappa + 2/gamma
double mu1(const ModelParams& params);
/// Window for m_t: g(t) +- mu1 log log t / log t.
PredictorWindow m_window(const ModelParams& params, double t);

/// -1/(2 kappa) - log kappa + gamma - log(2 gamma)/2 + 1
double h_constant(const ModelParams& params);
/// 2 kappa^(2/3)
double mu2(const ModelParams& params);
/// kappa (log t + sqrt(2 gamma log t) - log log t / 2 + c); needs t > e.
double h_of_t(const ModelParams& params, double t);
/// Window for M_t: h(t) +- mu2 / (log t)^(1/3).
PredictorWindow M_window(const ModelParams& params, double t);

/// Centring of -log K_n^min: sqrt(2 gamma n / kappa) - log(n)/2 - 1/(2 kappa)
/// - log(kappa)/2 + 1 - log(2 gamma)/2, for n >= 1.
double w_n(const ModelParams& params, int n);

/// Root z_n of z + log z + 1/(2 kappa) + log kappa - 1 = sqrt(2 gamma n / kappa).
/// Safeguarded Newton; the residual at the returned root is below tol.
double z_solve(const ModelParams& params, int n, double tol = 1e-12);

/// (s_n^-, s_n^+) = exp(-z_n -+ log^2(z_n) / z_n).
std::pair<double, double> s_n_bounds(const ModelParams& params, int n);

/// Jump-time envelopes for the largest fragment,
/// a(x) = q^-x (gamma x - log(2 log x)), b(x) = q^-x (gamma x + 2 log x), x >= 2.
double jump_lower_a(const ModelParams& params, double x);
double jump_upper_b(const ModelParams& params, double x);
struct JumpInverses {
  double a_inv = 0.0;
  double b_inv = 0.0;
};
/// Inverts a and b at t by bisection on x >= 2. Throws std::domain_error
/// when t < b(2), where b^-1 would leave the monotone regime.
JumpInverses ab_inverses(const ModelParams& params, double t);

/// Jump-time envelope for the smallest fragment,
/// p_sigma(x) = exp(x/kappa - sqrt(2 gamma x / kappa) + log(x)/2 + c~ + sigma x^(-1/3))
/// with c~ = 1/(2 kappa) + log(kappa)/2 - 1 + log(2 gamma)/2, i.e.
/// exp(x/kappa - w_x + sigma x^(-1/3)).
double p_sigma(const ModelParams& params, double x, int sigma);
/// Smallest x at which p_sigma is treated as monotone: max(2, 2 gamma kappa).
double p_sigma_domain_start(const ModelParams& params);
double p_sigma_inverse(const ModelParams& params, double t, int sigma);

/// Tabulated bounds a(n) <= T_n <= b(n) for n = first_n, first_n + 1, ...
/// on the jump times of an increasing integer step function.
struct JumpBounds {
  int first_n = 0;
  std::vector<double> lower;  // a(n)
  std::vector<double> upper;  // b(n)
};

/// [ceil_strict(b^-1(t)), ceil_strict(a^-1(t))] with the inverses taken on the
/// piecewise-linear interpolants of the tables. Throws std::out_of_range if
/// t < a(first_n) or t >= a(last).
std::pair<int, int> jump_window_convert(const JumpBounds& bounds, double t);

}  // namespace fragsim::predictors

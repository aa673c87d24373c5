#include "fragsim/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fragsim::predictors {
namespace {

void require_t_above_e(double t) {
  if (!(t > std::numbers::e) || !std::isfinite(t)) {
    throw std::domain_error("predictor needs t > e so that log log t > 0");
  }
}

// Smallest x in [lo, inf) with f(x) >= target for increasing f, by bracketing
// then bisection to full double precision.
template <class F>
double invert_increasing(F&& f, double lo, double target) {
  double hi = std::max(2.0 * lo, lo + 1.0);
  for (int i = 0; f(hi) < target; ++i) {
    if (i > 2000) {
      throw std::runtime_error("could not bracket root");
    }
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 300 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

int ceil_strict(double x) { return static_cast<int>(std::floor(x)) + 1; }

PredictorWindow PredictorWindow::around(double center, double half_width) {
  return {ceil_strict(center - half_width), ceil_strict(center + half_width), center,
          half_width};
}

double g_of_t(const ModelParams& params, double t) {
  require_t_above_e(t);
  const double log_t = std::log(t);
  return params.kappa() * (log_t - std::log(log_t) - std::log(params.gamma() * params.kappa()));
}

double mu1(const ModelParams& params) { return params.kappa() + 2.0 / params.gamma(); }

PredictorWindow m_window(const ModelParams& params, double t) {
  const double center = g_of_t(params, t);
  const double log_t = std::log(t);
  return PredictorWindow::around(center, mu1(params) * std::log(log_t) / log_t);
}

double h_constant(const ModelParams& params) {
  const double kappa = params.kappa();
  const double gamma = params.gamma();
  return -1.0 / (2.0 * kappa) - std::log(kappa) + gamma - 0.5 * std::log(2.0 * gamma) + 1.0;
}

double mu2(const ModelParams& params) { return 2.0 * std::pow(params.kappa(), 2.0 / 3.0); }

double h_of_t(const ModelParams& params, double t) {
  require_t_above_e(t);
  const double log_t = std::log(t);
  return params.kappa() * (log_t + std::sqrt(2.0 * params.gamma() * log_t) -
                           0.5 * std::log(log_t) + h_constant(params));
}

PredictorWindow M_window(const ModelParams& params, double t) {
  const double center = h_of_t(params, t);
  return PredictorWindow::around(center, mu2(params) / std::cbrt(std::log(t)));
}

double w_n(const ModelParams& params, int n) {
  if (n < 1) {
    throw std::domain_error("w_n needs n >= 1");
  }
  const double kappa = params.kappa();
  const double gamma = params.gamma();
  const double nd = n;
  return std::sqrt(2.0 * gamma * nd / kappa) - 0.5 * std::log(nd) - 1.0 / (2.0 * kappa) -
         0.5 * std::log(kappa) + 1.0 - 0.5 * std::log(2.0 * gamma);
}

double z_solve(const ModelParams& params, int n, double tol) {
  if (n < 1) {
    throw std::domain_error("z_n needs n >= 1");
  }
  if (!(tol > 0.0)) {
    throw std::domain_error("tol must be positive");
  }
  const double kappa = params.kappa();
  const double rhs = std::sqrt(2.0 * params.gamma() * n / kappa);
  const double offset = 1.0 / (2.0 * kappa) + std::log(kappa) - 1.0;
  auto residual = [&](double z) { return z + std::log(z) + offset - rhs; };

  const double guess = rhs;
  double lo = guess;
  while (residual(lo) > 0.0) {
    lo *= 0.5;
  }
  double hi = guess;
  while (residual(hi) < 0.0) {
    hi *= 2.0;
  }

  double z = guess;
  for (int iter = 0; iter < 100; ++iter) {
    const double r = residual(z);
    if (std::abs(r) < tol) {
      return z;
    }
    (r < 0.0 ? lo : hi) = z;
    double next = z - r / (1.0 + 1.0 / z);
    if (!(next > 0.0 && next < 2.0 * guess) || next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);
    }
    z = next;
  }
  if (std::abs(residual(z)) < tol) {
    return z;
  }
  throw std::runtime_error("z_solve did not converge for n=" + std::to_string(n));
}

std::pair<double, double> s_n_bounds(const ModelParams& params, int n) {
  const double z = z_solve(params, n);
  const double spread = std::log(z) * std::log(z) / z;
  return {std::exp(-z - spread), std::exp(-z + spread)};
}

namespace {
double log_a(const ModelParams& params, double x) {
  return x * params.log_inv_q() + std::log(params.gamma() * x - std::log(2.0 * std::log(x)));
}
double log_b(const ModelParams& params, double x) {
  return x * params.log_inv_q() + std::log(params.gamma() * x + 2.0 * std::log(x));
}
}  // namespace

double jump_lower_a(const ModelParams& params, double x) { return std::exp(log_a(params, x)); }
double jump_upper_b(const ModelParams& params, double x) { return std::exp(log_b(params, x)); }

JumpInverses ab_inverses(const ModelParams& params, double t) {
  if (!(t > 0.0) || std::log(t) < log_b(params, 2.0)) {
    throw std::domain_error("ab_inverses needs t >= b(2) (monotone regime x >= 2)");
  }
  const double log_t = std::log(t);
  JumpInverses out;
  out.a_inv = invert_increasing([&](double x) { return log_a(params, x); }, 2.0, log_t);
  out.b_inv = invert_increasing([&](double x) { return log_b(params, x); }, 2.0, log_t);
  return out;
}

namespace {
double c_tilde(const ModelParams& params) {
  const double kappa = params.kappa();
  return 1.0 / (2.0 * kappa) + 0.5 * std::log(kappa) - 1.0 + 0.5 * std::log(2.0 * params.gamma());
}

double log_p_sigma(const ModelParams& params, double x, int sigma) {
  const double kappa = params.kappa();
  return x / kappa - std::sqrt(2.0 * params.gamma() * x / kappa) + 0.5 * std::log(x) +
         c_tilde(params) + sigma / std::cbrt(x);
}

void require_sigma(int sigma) {
  if (sigma != 1 && sigma != -1) {
    throw std::domain_error("sigma must be +1 or -1");
  }
}
}  // namespace

double p_sigma(const ModelParams& params, double x, int sigma) {
  require_sigma(sigma);
  if (!(x > 0.0)) {
    throw std::domain_error("p_sigma needs x > 0");
  }
  return std::exp(log_p_sigma(params, x, sigma));
}

double p_sigma_domain_start(const ModelParams& params) {
  return std::max(2.0, 2.0 * params.gamma() * params.kappa());
}

double p_sigma_inverse(const ModelParams& params, double t, int sigma) {
  require_sigma(sigma);
  const double start = p_sigma_domain_start(params);
  if (!(t > 0.0) || std::log(t) < log_p_sigma(params, start, sigma)) {
    throw std::domain_error("p_sigma_inverse: t is below the monotone regime");
  }
  return invert_increasing([&](double x) { return log_p_sigma(params, x, sigma); }, start,
                           std::log(t));
}

namespace {
void require_increasing(const std::vector<double>& table, const char* name) {
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i] > table[i - 1])) {
      throw std::invalid_argument(std::string(name) + " table must be strictly increasing");
    }
  }
}

// Inverse of the piecewise-linear interpolant through (first_n + i, table[i]).
double table_inverse(const std::vector<double>& table, int first_n, double t) {
  const auto it = std::upper_bound(table.begin(), table.end(), t);
  const auto i = static_cast<std::size_t>(it - table.begin()) - 1;
  const double frac = (t - table[i]) / (table[i + 1] - table[i]);
  return first_n + static_cast<double>(i) + frac;
}
}  // namespace

std::pair<int, int> jump_window_convert(const JumpBounds& bounds, double t) {
  if (bounds.lower.size() != bounds.upper.size() || bounds.lower.size() < 2) {
    throw std::invalid_argument("jump bounds need two tables of equal length >= 2");
  }
  require_increasing(bounds.lower, "lower");
  require_increasing(bounds.upper, "upper");
  for (std::size_t i = 0; i < bounds.lower.size(); ++i) {
    if (bounds.lower[i] > bounds.upper[i]) {
      throw std::invalid_argument("lower bound exceeds upper bound at n=" +
                                  std::to_string(bounds.first_n + static_cast<int>(i)));
    }
  }
  if (t < bounds.lower.front() || t >= bounds.lower.back()) {
    throw std::out_of_range("t outside the tabulated jump range");
  }
  const int hi = ceil_strict(table_inverse(bounds.lower, bounds.first_n, t));
  // Before b(first_n) the bound only says f(t) >= first_n.
  const int lo = t < bounds.upper.front()
                     ? bounds.first_n
                     : ceil_strict(table_inverse(bounds.upper, bounds.first_n, t));
  return {std::min(lo, hi), hi};
}

}  // namespace fragsim::predictors

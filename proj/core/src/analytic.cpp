#include "fragsim/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fragsim/compensated_sum.hpp"

namespace fragsim::analytic {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// exp() of anything below this is an exact zero in double precision.
constexpr double kExpUnderflow = -746.0;

void require_nonneg_t(double t) {
  if (!(t >= 0.0)) {
    throw std::domain_error("t must be non-negative");
  }
}

void require_nonneg_n(int n) {
  if (n < 0) {
    throw std::domain_error("n must be non-negative");
  }
}

// log phi_j(q) for j = 0..n.
std::vector<double> log_phi_table(double q, int n) {
  std::vector<double> table(static_cast<std::size_t>(n) + 1, 0.0);
  double qj = 1.0;
  for (int j = 1; j <= n; ++j) {
    qj *= q;
    table[j] = table[j - 1] + std::log1p(-qj);
  }
  return table;
}

// q^{-j} t with t given as log t; zero when t = 0.
double scaled_time(double log_inv_q, int j, double log_t) {
  if (log_t == kNegInf) {
    return 0.0;
  }
  return std::exp(j * log_inv_q + log_t);
}

struct SeriesResult {
  double value = 0.0;
  double abs_error = 0.0;
};

// sum_{j=0..n} (-1)^j q^{j(j+1)/2 - shift_j} / (phi_j phi_{n-j}) exp(-q^{-j} t)
// with shift_j = j for the density.
SeriesResult finite_series(double q, int n, double log_t, bool density) {
  const double log_inv_q = -std::log(q);
  const auto lphi = log_phi_table(q, n);
  CompensatedSum sum;
  double term_error = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double jj = static_cast<double>(j);
    const double power = density ? jj * (jj - 1.0) / 2.0 : jj * (jj + 1.0) / 2.0;
    const double log_coeff = -power * log_inv_q - lphi[j] - lphi[n - j];
    const double decay = scaled_time(log_inv_q, j, log_t);
    const double log_mag = log_coeff - decay;
    if (log_mag < kExpUnderflow) {
      continue;
    }
    const double mag = std::exp(log_mag);
    sum.add((j % 2 == 0) ? mag : -mag);
    // Relative error of exp(log_mag) scales with the magnitude of its argument.
    term_error += mag * kEps * (4.0 + std::abs(log_coeff) + decay + jj);
  }
  return {sum.value(), term_error + sum.rounding_bound()};
}

TailEval survival_from_log_t(double q, int n, double log_t) {
  const SeriesResult series = finite_series(q, n, log_t, /*density=*/false);
  double value = series.value;
  double abs_error = series.abs_error;

  const double smaller = std::min(value, 1.0 - value);
  const bool poorly_resolved = smaller <= 0.0 || abs_error > kCancellationThreshold * smaller;
  if (poorly_resolved && log_t != kNegInf && 1.0 - value < 0.5) {
    // Small-t regime: P(K_n <= t) is bracketed by the simplex volume bounds.
    const double log_inv_q = -std::log(q);
    const int m = n + 1;
    const double md = m;
    const double log_upper =
        md * log_t + md * (md - 1.0) / 2.0 * log_inv_q - std::lgamma(md + 1.0);
    const double jensen = std::exp(log_t + md * log_inv_q) / ((1.0 / q - 1.0) * md);
    const double upper = std::exp(log_upper);
    const double lower = std::exp(log_upper - jensen);
    const double half_width = 0.5 * (upper - lower);
    if (half_width < abs_error) {
      value = 1.0 - 0.5 * (upper + lower);
      abs_error = half_width + kEps;
    }
  }
  return TailEval::clamped(value, abs_error);
}

double log_or_neg_inf(double t) { return t == 0.0 ? kNegInf : std::log(t); }

}  // namespace

double phi_n(double q, int n) {
  require_unit_interval_q(q);
  require_nonneg_n(n);
  double product = 1.0;
  double qj = 1.0;
  for (int j = 1; j <= n; ++j) {
    qj *= q;
    product *= 1.0 - qj;
  }
  return product;
}

double phi_inf(double q, double tol) {
  require_unit_interval_q(q);
  if (!(tol > 0.0)) {
    throw std::domain_error("tol must be positive");
  }
  double product = 1.0;
  double qj = 1.0;
  for (int j = 1; j < 1'000'000; ++j) {
    qj *= q;
    product *= 1.0 - qj;
    // prod_{i>j}(1-q^i) >= 1 - q^{j+1}/(1-q)
    if (qj * q / (1.0 - q) < tol) {
      break;
    }
  }
  return product;
}

TailEval survival_Kn(double q, int n, double t) {
  require_unit_interval_q(q);
  require_nonneg_n(n);
  require_nonneg_t(t);
  return survival_from_log_t(q, n, log_or_neg_inf(t));
}

TailEval survival_Kn(const ModelParams& params, int n, double t) {
  return survival_Kn(params.q(), n, t);
}

TailEval density_Kn(double q, int n, double t) {
  require_unit_interval_q(q);
  require_nonneg_n(n);
  require_nonneg_t(t);
  const SeriesResult series = finite_series(q, n, log_or_neg_inf(t), /*density=*/true);
  return TailEval::clamped(series.value, series.abs_error);
}

TailEval survival_Kinf(double q, double t, double tol) {
  require_unit_interval_q(q);
  require_nonneg_t(t);
  if (!(tol > 0.0)) {
    throw std::domain_error("tol must be positive");
  }
  const double log_inv_q = -std::log(q);
  const double log_t = log_or_neg_inf(t);
  const double euler = phi_inf(q);
  CompensatedSum sum;
  double term_error = 0.0;
  double log_phi_j = 0.0;
  for (int j = 0; j < 100'000; ++j) {
    const double jj = static_cast<double>(j);
    if (j > 0) {
      log_phi_j += std::log1p(-std::exp(-jj * log_inv_q));
    }
    const double log_coeff = -jj * (jj + 1.0) / 2.0 * log_inv_q - log_phi_j;
    if (j > 0 && std::exp(log_coeff) < tol * euler) {
      break;
    }
    const double decay = scaled_time(log_inv_q, j, log_t);
    const double log_mag = log_coeff - decay;
    if (log_mag < kExpUnderflow) {
      continue;
    }
    const double mag = std::exp(log_mag);
    sum.add((j % 2 == 0) ? mag : -mag);
    term_error += mag * kEps * (4.0 + std::abs(log_coeff) + decay + jj);
  }
  const double value = sum.value() / euler;
  const double err = (term_error + sum.rounding_bound()) / euler + tol;
  return TailEval::clamped(value, err);
}

TailEval survival_Sn(const ModelParams& params, int n, double t) {
  require_nonneg_n(n);
  require_nonneg_t(t);
  const double log_t = t == 0.0 ? kNegInf : std::log(t) - n * params.log_inv_q();
  return survival_from_log_t(params.q(), n, log_t);
}

TailEval occupancy_Xt(const ModelParams& params, int n, double t) {
  require_nonneg_n(n);
  require_nonneg_t(t);
  const TailEval upper = survival_Sn(params, n, t);
  if (n == 0) {
    return upper;
  }
  const TailEval lower = survival_Sn(params, n - 1, t);
  return TailEval::clamped(upper.value - lower.value,
                           upper.abs_error + lower.abs_error + kEps);
}

double tail_envelope_residual(double q, int n, double t) {
  require_unit_interval_q(q);
  require_nonneg_t(t);
  const double log_inv_q = -std::log(q);
  CompensatedSum sum;
  if (n >= 0) {
    const auto lphi = log_phi_table(q, n);
    for (int j = 1; j <= n; ++j) {
      const double jj = j;
      const double log_coeff =
          -jj * (jj + 1.0) / 2.0 * log_inv_q + lphi[n] - lphi[j] - lphi[n - j];
      const double log_mag = log_coeff - t * std::expm1(jj * log_inv_q);
      if (log_mag < kExpUnderflow) {
        continue;
      }
      sum.add((j % 2 == 0 ? 1.0 : -1.0) * std::exp(log_mag));
    }
    return sum.value();
  }
  double log_phi_j = 0.0;
  for (int j = 1; j < 100'000; ++j) {
    const double jj = j;
    log_phi_j += std::log1p(-std::exp(-jj * log_inv_q));
    const double log_coeff = -jj * (jj + 1.0) / 2.0 * log_inv_q - log_phi_j;
    const double log_mag = log_coeff - t * std::expm1(jj * log_inv_q);
    if (log_coeff < kExpUnderflow || log_mag < kExpUnderflow) {
      break;
    }
    sum.add((j % 2 == 0 ? 1.0 : -1.0) * std::exp(log_mag));
  }
  return sum.value();
}

namespace {
double require_left_tail_s(double s) {
  if (!(s > 0.0) || s > std::exp(-2.0)) {
    throw std::domain_error("s must lie in (0, e^-2]");
  }
  return std::log(1.0 / s);
}
}  // namespace

double left_tail_F(const ModelParams& params, double s) {
  const double big_s = require_left_tail_s(s);
  const double kappa = params.kappa();
  const double log_big_s = std::log(big_s);
  const double inner = big_s + log_big_s + 1.0 / (2.0 * kappa) + std::log(kappa) - 1.0;
  return kappa / 2.0 * inner * inner + (0.5 + kappa) * log_big_s;
}

SimplexBounds simplex_bounds(double q, int m, double s) {
  require_unit_interval_q(q);
  if (m < 1) {
    throw std::domain_error("simplex dimension m must be >= 1");
  }
  if (!(s >= 0.0)) {
    throw std::domain_error("s must be non-negative");
  }
  if (s == 0.0) {
    return {0.0, 0.0, kNegInf, kNegInf};
  }
  const double md = m;
  const double log_inv_q = -std::log(q);
  const double log_upper =
      md * std::log(s) + md * (md - 1.0) / 2.0 * log_inv_q - std::lgamma(md + 1.0);
  const double jensen = std::exp(std::log(s) + md * log_inv_q) / ((1.0 / q - 1.0) * md);
  const double log_lower = log_upper - jensen;
  return {std::exp(log_lower), std::exp(log_upper), log_lower, log_upper};
}

int critical_m(const ModelParams& params, double s) {
  const double big_s = require_left_tail_s(s);
  const double x = params.kappa() * (big_s + std::log(big_s));
  return static_cast<int>(std::floor(x)) + 1;
}

double stirling_exponent(double x, double y, double kappa) {
  if (!(x > 0.0) || !(y > 0.0) || !(kappa > 0.0)) {
    throw std::domain_error("stirling_exponent needs x, y, kappa > 0");
  }
  return y * y / (2.0 * kappa) - (std::log(1.0 / x) - 1.0 + 1.0 / (2.0 * kappa)) * y -
         (y + 0.5) * std::log(y);
}

double gumbel_limit_cdf(double q, double s) {
  return std::exp(-std::exp(-s) / phi_inf(q));
}

double gumbel_limit_quantile(double q, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("probability must lie in (0,1)");
  }
  return -std::log(-phi_inf(q) * std::log(p));
}

double gumbel_limit_mean(double q) {
  return -std::log(phi_inf(q)) + std::numbers::egamma;
}

}  // namespace fragsim::analytic

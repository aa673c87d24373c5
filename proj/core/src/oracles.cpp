#include "fragsim/oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fragsim::oracles {
namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr int kNodes = 20;

std::vector<double> chebyshev_coefficients(const std::vector<double>& samples) {
  std::vector<double> c(kNodes, 0.0);
  for (int j = 0; j < kNodes; ++j) {
    double sum = 0.0;
    for (int i = 0; i < kNodes; ++i) {
      sum += samples[i] * std::cos(std::numbers::pi * j * (i + 0.5) / kNodes);
    }
    c[j] = sum * 2.0 / kNodes;
  }
  c[0] *= 0.5;
  return c;
}

double clenshaw(const double* c, double u) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (int j = kNodes - 1; j >= 1; --j) {
    const double b0 = 2.0 * u * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return u * b1 - b2 + c[0];
}

}  // namespace

ConvolutionOracle::ConvolutionOracle(double q, int n, double t_max, double tol)
    : t_max_(t_max), tol_(tol) {
  if (!(q > 0.0 && q < 1.0) || n < 0 || !(t_max > 0.0)) {
    throw std::domain_error("ConvolutionOracle needs q in (0,1), n >= 0, t_max > 0");
  }
  // Fastest component innermost, where it is integrated in closed form.
  for (int i = n; i >= 0; --i) {
    rate_.push_back(std::pow(q, -i));
  }
  tables_.resize(rate_.size());
  const double fastest = rate_.front();
  const auto panels = static_cast<std::size_t>(std::ceil(0.5 * t_max * fastest));
  for (std::size_t level = 1; level + 1 < rate_.size(); ++level) {
    Table table;
    table.width = t_max / static_cast<double>(panels);
    table.coeffs.reserve(panels * kNodes);
    std::vector<double> samples(kNodes);
    for (std::size_t p = 0; p < panels; ++p) {
      const double a = table.width * static_cast<double>(p);
      for (int i = 0; i < kNodes; ++i) {
        const double u = std::cos(std::numbers::pi * (i + 0.5) / kNodes);
        samples[i] = convolve(static_cast<int>(level), a + 0.5 * table.width * (u + 1.0));
      }
      const auto c = chebyshev_coefficients(samples);
      table.coeffs.insert(table.coeffs.end(), c.begin(), c.end());
    }
    tables_[level] = std::move(table);
  }
}

double ConvolutionOracle::prefix(int level, double x) const {
  if (x <= 0.0) {
    return 1.0;
  }
  if (level == 0) {
    return std::exp(-rate_[0] * x);
  }
  const Table& table = tables_[level];
  const auto panels = table.coeffs.size() / kNodes;
  auto p = static_cast<std::size_t>(x / table.width);
  p = std::min(p, panels - 1);
  const double a = table.width * static_cast<double>(p);
  const double u = 2.0 * (x - a) / table.width - 1.0;
  return clenshaw(&table.coeffs[p * kNodes], u);
}

// P(Z_0 + ... + Z_level > x) from the table of level - 1.
double ConvolutionOracle::convolve(int level, double x) const {
  if (x <= 0.0) {
    return 1.0;
  }
  const double lambda = rate_[level];
  // v = lambda z turns the kernel into e^{-v} dv; past v = 45 the remaining
  // mass is below 3e-20.
  const double v_max = std::min(lambda * x, 45.0);
  auto integrand = [&](double v) { return std::exp(-v) * prefix(level - 1, x - v / lambda); };
  double err = 0.0;
  return std::exp(-lambda * x) +
         gauss_kronrod<double, 15>::integrate(integrand, 0.0, v_max, 20, tol_, &err);
}

double ConvolutionOracle::survival(double t) const {
  if (t > t_max_) {
    throw std::out_of_range("ConvolutionOracle evaluated beyond t_max");
  }
  return convolve(static_cast<int>(rate_.size()) - 1, t);
}

double convolution_survival(double q, int n, double t) {
  return ConvolutionOracle(q, n, std::max(t, 1e-3)).survival(t);
}

double hypoexponential_cdf(double q, int m, double s) {
  if (!(q > 0.0 && q < 1.0) || m < 1) {
    throw std::domain_error("hypoexponential_cdf needs q in (0,1) and m >= 1");
  }
  if (s <= 0.0) {
    return 0.0;
  }
  std::vector<long double> rate(m);
  long double rate_product = 1.0L;
  for (int i = 0; i < m; ++i) {
    rate[i] = std::pow(static_cast<long double>(q), -i);
    rate_product *= rate[i];
  }
  const long double x = s;
  if (x * rate[m - 1] <= 4.0L) {
    // CDF(s) = prod(rate) sum_k (-1)^k h_k(rate) s^{m+k} / (m+k)!
    // where h_k is the complete homogeneous symmetric polynomial.
    std::vector<long double> h(1, 1.0L);
    long double sum = 0.0L;
    long double power = rate_product;
    for (int i = 1; i <= m; ++i) {
      power *= x / i;
    }
    for (int k = 0; k < 400; ++k) {
      if (k > 0) {
        // h_k(r_0..r_{m-1}) via h_k^{(i)} = h_k^{(i-1)} + r_i h_{k-1}^{(i)}.
        std::vector<long double> row(m);
        row[0] = rate[0] * h[0];
        for (int i = 1; i < m; ++i) {
          row[i] = row[i - 1] + rate[i] * h[i];
        }
        h.swap(row);
        power *= x / (m + k);
      } else {
        h.assign(m, 1.0L);
      }
      const long double term = power * h[m - 1];
      sum += (k % 2 == 0) ? term : -term;
      if (k > 10 && term < 1e-30L * std::fabs(sum)) {
        break;
      }
    }
    return static_cast<double>(sum);
  }
  long double survival = 0.0L;
  for (int i = 0; i < m; ++i) {
    long double coeff = 1.0L;
    for (int j = 0; j < m; ++j) {
      if (j != i) {
        coeff *= rate[j] / (rate[j] - rate[i]);
      }
    }
    survival += coeff * std::exp(-rate[i] * x);
  }
  return static_cast<double>(1.0L - survival);
}

}  // namespace fragsim::oracles

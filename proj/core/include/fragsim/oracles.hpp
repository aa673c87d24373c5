#pragma once

#include <vector>

/// Reference computations that share no code with the analytic series.
/// Slow by design; meant for verification only.
namespace fragsim::oracles {

/// P(K_n > t) for K_n = sum_{i=0}^n q^i W_i on [0, t_max], built by
/// convolving the n+1 exponential laws one at a time with adaptive
/// Gauss-Kronrod quadrature. Each intermediate survival function is held as a
/// piecewise Chebyshev interpolant on panels narrower than the fastest scale.
class ConvolutionOracle {
 public:
  ConvolutionOracle(double q, int n, double t_max, double tol = 1e-11);

  double survival(double t) const;

 private:
  struct Table {
    double width = 0.0;
    std::vector<double> coeffs;  // kNodes per panel
  };

  double prefix(int level, double x) const;
  double convolve(int level, double x) const;

  std::vector<double> rate_;
  double t_max_;
  double tol_;
  std::vector<Table> tables_;  // tables_[j] interpolates level j
};

/// One-off convenience wrapper around ConvolutionOracle.
double convolution_survival(double q, int n, double t);

/// Exact P(K_{m-1} <= s) for the hypoexponential law with rates q^{-i},
/// i < m. Taylor series near 0, partial fractions otherwise (long double).
double hypoexponential_cdf(double q, int m, double s);

}  // namespace fragsim::oracles

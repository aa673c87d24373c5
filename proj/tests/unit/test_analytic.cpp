#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "fragsim/analytic.hpp"
#include "fragsim/compensated_sum.hpp"
#include "fragsim/model_params.hpp"
#include "fragsim/oracles.hpp"

namespace fa = fragsim::analytic;
using fragsim::ModelParams;

// Reference values below come from a 50-digit evaluation of the same series
// (tests/oracles/golden_values.py).

TEST(ModelParams, DerivedConstants) {
  const ModelParams p(2, 1.0);
  EXPECT_DOUBLE_EQ(p.q(), 0.5);
  EXPECT_DOUBLE_EQ(p.gamma(), std::log(2.0));
  EXPECT_DOUBLE_EQ(p.kappa(), 1.0 / std::log(2.0));
  const ModelParams r(3, 0.5);
  EXPECT_NEAR(r.q(), std::pow(3.0, -0.5), 1e-15);
}

TEST(ModelParams, RejectsBadInputs) {
  EXPECT_THROW(ModelParams(1, 1.0), std::domain_error);
  EXPECT_THROW(ModelParams(2, 0.0), std::domain_error);
  EXPECT_THROW(ModelParams(2, -1.0), std::domain_error);
  EXPECT_THROW(ModelParams(2, NAN), std::domain_error);
}

TEST(Pochhammer, FiniteAndInfinite) {
  EXPECT_DOUBLE_EQ(fa::phi_n(0.5, 0), 1.0);
  EXPECT_NEAR(fa::phi_n(0.5, 5), 0.298004150390625, 1e-16);
  EXPECT_NEAR(fa::phi_inf(0.5), 0.28878809508660242, 1e-15);
  EXPECT_NEAR(fa::phi_inf(0.8) / 0.0033680058524231213, 1.0, 1e-12);
  EXPECT_GT(fa::phi_n(0.8, 30), fa::phi_inf(0.8));
  EXPECT_NEAR(fa::phi_n(0.8, 200), fa::phi_inf(0.8), 1e-17);
  EXPECT_THROW(fa::phi_inf(1.0), std::domain_error);
  EXPECT_THROW(fa::phi_n(0.5, -1), std::domain_error);
}

TEST(SurvivalKn, GoldenValues) {
  EXPECT_NEAR(fa::survival_Kn(0.5, 1, 1.0).value, 0.60042359910627195, 1e-14);
  EXPECT_NEAR(fa::density_Kn(0.5, 1, 1.0).value, 0.46508831586965926, 1e-14);
  EXPECT_NEAR(fa::survival_Kn(0.5, 30, 5.0).value, 0.023174597097489675, 1e-13);
}

TEST(SurvivalKn, GenerationZeroIsExponential) {
  for (const double t : {0.0, 0.3, 1.0, 7.5}) {
    EXPECT_NEAR(fa::survival_Kn(0.7, 0, t).value, std::exp(-t), 1e-15);
  }
}

TEST(SurvivalKn, ErrorBoundCoversTruth) {
  for (const double q : {0.3, 0.5, 0.8}) {
    const fragsim::oracles::ConvolutionOracle oracle(q, 2, 3.0);
    for (const double t : {0.05, 0.4, 1.5, 3.0}) {
      const auto eval = fa::survival_Kn(q, 2, t);
      EXPECT_LE(std::abs(eval.value - oracle.survival(t)), eval.abs_error + 1e-11)
          << "q=" << q << " t=" << t;
    }
  }
}

TEST(SurvivalKn, MonotoneInTAndN) {
  for (const double q : {0.3, 0.6, 0.9}) {
    double previous = 1.0;
    for (double t = 0.0; t <= 30.0; t += 0.25) {
      const double s = fa::survival_Kn(q, 6, t).value;
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, previous + 1e-12);
      previous = s;
    }
    for (int n = 0; n < 20; ++n) {
      EXPECT_LE(fa::survival_Kn(q, n, 2.0).value, fa::survival_Kn(q, n + 1, 2.0).value + 1e-12);
    }
  }
}

TEST(SurvivalKn, TinyTUsesSimplexRegime) {
  // P(K_n > t) = 1 - O(t^{n+1}); the result must stay in [0,1] and near 1.
  const auto eval = fa::survival_Kn(0.5, 8, 1e-6);
  EXPECT_LE(eval.value, 1.0);
  EXPECT_GT(eval.value, 1.0 - 1e-12);
}

TEST(SurvivalKn, ParamsOverloadMatchesQ) {
  const ModelParams p(2, 1.0);
  EXPECT_EQ(fa::survival_Kn(p, 4, 1.3).value, fa::survival_Kn(0.5, 4, 1.3).value);
}

TEST(SurvivalKinf, LimitOfFiniteN) {
  for (const double t : {0.5, 2.0, 6.0}) {
    EXPECT_NEAR(fa::survival_Kinf(0.5, t).value, fa::survival_Kn(0.5, 80, t).value, 1e-12);
  }
}

TEST(Density, MatchesDerivativeOfSurvival) {
  const double h = 1e-5;
  for (const double t : {0.3, 1.0, 3.0}) {
    const double slope =
        (fa::survival_Kn(0.6, 4, t - h).value - fa::survival_Kn(0.6, 4, t + h).value) / (2 * h);
    EXPECT_NEAR(fa::density_Kn(0.6, 4, t).value, slope, 1e-8);
  }
}

TEST(SurvivalSn, IsRescaledKn) {
  const ModelParams p(2, 1.0);
  for (const double t : {32.0, 64.0}) {
    EXPECT_NEAR(fa::survival_Sn(p, 5, t).value, fa::survival_Kn(0.5, 5, t / 32.0).value, 1e-14);
  }
}

TEST(Occupancy, SumsToOneOverGenerations) {
  const ModelParams p(2, 1.0);
  double total = 0.0;
  for (int n = 0; n < 60; ++n) {
    const double x = fa::occupancy_Xt(p, n, 10.0).value;
    EXPECT_GE(x, -1e-15);
    total += x;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Envelope, ResidualMatchesDirectEvaluationAtModerateT) {
  for (const double t : {2.0, 4.0}) {
    const double direct =
        fa::survival_Kn(0.5, 5, t).value * fa::phi_n(0.5, 5) * std::exp(t) - 1.0;
    EXPECT_NEAR(fa::tail_envelope_residual(0.5, 5, t), direct, 1e-12);
  }
}

TEST(Envelope, ScaledResidualStaysBounded) {
  for (const double q : {0.5, 0.8}) {
    for (double t = 2.0; t <= 40.0; t += 2.0) {
      const double scaled =
          std::abs(fa::tail_envelope_residual(q, -1, t)) * std::exp((1.0 / q - 1.0) * t);
      EXPECT_TRUE(std::isfinite(scaled));
      EXPECT_LT(scaled, 5.0);
    }
  }
}

TEST(LeftTail, GoldenAndDomain) {
  const ModelParams p(2, 1.0);
  EXPECT_NEAR(fa::left_tail_F(p, std::exp(-5.0)), 31.962020117816328, 1e-10);
  EXPECT_THROW(fa::left_tail_F(p, 0.5), std::domain_error);
  EXPECT_THROW(fa::left_tail_F(p, 0.0), std::domain_error);
  EXPECT_EQ(fa::critical_m(p, std::exp(-5.0)), 10);
}

TEST(LeftTail, SimplexSandwichBracketsExactCdf) {
  for (const double q : {0.3, 0.5, 0.8}) {
    for (int m = 1; m <= 4; ++m) {
      for (const double s : {1e-3, 0.05, 0.5, 2.0}) {
        const auto b = fa::simplex_bounds(q, m, s);
        const double exact = fragsim::oracles::hypoexponential_cdf(q, m, s);
        EXPECT_LE(b.lower, exact);
        EXPECT_GE(b.upper, exact);
        EXPECT_NEAR(std::log(b.upper), b.log_upper, 1e-12);
      }
    }
  }
}

TEST(LeftTail, StirlingTracksLogUpperBound) {
  const ModelParams p(2, 1.0);
  const double s = std::exp(-30.0);
  const int m = fa::critical_m(p, s);
  const double exact = fa::simplex_bounds(p.q(), m, s).log_upper;
  EXPECT_NEAR(fa::stirling_exponent(s, m, p.kappa()), exact, 2.0);
}

TEST(Gumbel, QuantileInvertsCdf) {
  for (const double p : {0.01, 0.3, 0.5, 0.99}) {
    EXPECT_NEAR(fa::gumbel_limit_cdf(0.5, fa::gumbel_limit_quantile(0.5, p)), p, 1e-13);
  }
  EXPECT_NEAR(fa::gumbel_limit_mean(0.5), -std::log(fa::phi_inf(0.5)) + 0.57721566490153286,
              1e-14);
}

TEST(CompensatedSum, RecoversCancelledTerms) {
  fragsim::CompensatedSum sum;
  sum += 1.0;
  sum += 1e100;
  sum += 1.0;
  sum += -1e100;
  EXPECT_EQ(sum.value(), 2.0);
  EXPECT_EQ(sum.count(), 4u);
}

#include "hlap/conditions.hpp"
#include "hlap/certificate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hlap;

namespace {

ProblemSpec ball(int N, double R, double lambda, SourceSpec f) {
  ProblemSpec s;
  s.N = N;
  s.lambda = lambda;
  s.f = std::move(f);
  s.domain.kind = DomainKind::Ball;
  s.domain.R = R;
  return s;
}

ProblemSpec box(double L, double lambda, SourceSpec f) {
  ProblemSpec s;
  s.N = 2;
  s.lambda = lambda;
  s.f = std::move(f);
  s.domain.kind = DomainKind::Box;
  s.domain.L = L;
  return s;
}

}  // namespace

TEST(CheckLN, ConstantSourceGivesROverN) {
  for (int N : {2, 3, 4})
    for (double R : {0.5, 1.0, 5.0}) EXPECT_NEAR(*check_LN(ball(N, R, 0, SourceSpec::constant(1))), R / N, 1e-12);
}

TEST(CheckLN, ZeroSource) {
  EXPECT_NEAR(*check_LN(ball(3, 1, 0.7, SourceSpec::constant(0))), 0.35, 1e-15);
}

TEST(CheckLN, InverseRadiusIsNotInLN) {
  const auto spec = ball(3, 1, 0.5, SourceSpec::power(1, 1));
  EXPECT_FALSE(check_LN(spec).has_value());
  const auto rep = evaluate_conditions(spec);
  EXPECT_FALSE(rep.lhs_LN.has_value());
  EXPECT_FALSE(source_LN_norm(spec).note.empty());
}

TEST(CheckLN, StepDatumBelowItsBound) {
  const int N = 3;
  const double lambda = 0.5, a = 0.5;
  const double bound = step_flux_delta_bound(N, lambda, a);
  for (double frac : {0.2, 0.5, 0.99}) {
    const auto spec = ball(N, 1, lambda, SourceSpec::steps({a, 1.0}, {frac * bound}));
    EXPECT_LT(*check_LN(spec), 1.0);
  }
  // exactly at the bound the condition is an equality
  EXPECT_NEAR(*check_LN(ball(N, 1, lambda, SourceSpec::steps({a, 1.0}, {bound}))), 1.0, 1e-12);
}

TEST(CheckLN, PowerSourceClosedForm) {
  // ||r^{-1/2}||_{L^2(B_1)} in R^2 = (2 pi)^{1/2}
  EXPECT_NEAR(*check_LN(ball(2, 1, 0, SourceSpec::power(1, 0.5))), sobolev_constant(2) * std::sqrt(2 * M_PI), 1e-12);
}

TEST(CheckLorentz, ExtremePair) {
  for (int N : {2, 3, 4, 5})
    for (double alpha : {0.0, 0.3, 0.9}) {
      const auto spec = ball(N, 1, alpha * (N - 1), SourceSpec::power((1 - alpha) * (N - 1), 1));
      EXPECT_NEAR(check_Lorentz(spec), 1.0, 1e-9);
      EXPECT_EQ(evaluate_conditions(spec).regime, Regime::ExtremeBounded);
    }
}

TEST(CheckLorentz, ZeroSource) {
  EXPECT_NEAR(check_Lorentz(ball(3, 1, 1.0, SourceSpec::constant(0))), 0.5, 1e-15);
}

TEST(CheckLorentz, HardyLineFamily) {
  const int N = 3;
  const double lambda = 0.5;
  for (double a : {0.6, 1.0, 1.6, 2.0}) {
    const auto spec = ball(N, 1, lambda, SourceSpec::power(a - lambda, 1));
    EXPECT_NEAR(check_Lorentz(spec), a / (N - 1), 1e-12);
  }
}

TEST(CheckLorentz, ConstantSource) {
  // gamma |B_R|^{1/N} = R/(N-1)
  EXPECT_NEAR(check_Lorentz(ball(3, 2, 0, SourceSpec::constant(1))), 1.0, 1e-12);
}

TEST(Classify, HardyLineRegimes) {
  const int N = 3;
  const double lambda = 0.5;
  EXPECT_EQ(evaluate_conditions(ball(N, 1, lambda, SourceSpec::power(1.6 - lambda, 1))).regime,
            Regime::VanishPredicted);
  EXPECT_EQ(evaluate_conditions(ball(N, 1, lambda, SourceSpec::power(2 - lambda, 1))).regime,
            Regime::ExtremeBounded);
}

TEST(Classify, TorsionBlowup) {
  for (int N : {2, 3})
    for (double lambda : {0.0, 0.2, 0.9}) {
      const auto rep = evaluate_conditions(ball(N, N + 1.0, lambda, SourceSpec::constant(1)));
      EXPECT_EQ(rep.regime, Regime::BlowupExpected);
      EXPECT_NEAR(*rep.sobolev_term, (N + 1.0) / N, 1e-12);
    }
}

TEST(Classify, UnknownBand) {
  // S_N ||f|| = 0.9 with lambda/(N-1) = 0.3: above one, but no blow-up theorem
  const auto rep = evaluate_conditions(ball(2, 1.8, 0.3, SourceSpec::constant(1)));
  EXPECT_EQ(rep.regime, Regime::Unknown);
}

TEST(Classify, TrivialData) {
  const auto rep = evaluate_conditions(ball(2, 1, 0, SourceSpec::constant(0)));
  EXPECT_EQ(*rep.lhs_min(), 0.0);
  EXPECT_EQ(rep.regime, Regime::VanishPredicted);
  EXPECT_TRUE(rep.lambda_outside_hypothesis);
}

TEST(Classify, DualNormOnlyWhenSupplied) {
  auto spec = ball(3, 1, 0.5, SourceSpec::constant(1));
  EXPECT_FALSE(evaluate_conditions(spec).lhs_dual.has_value());
  spec.dual_norm_f = 0.1;
  EXPECT_NEAR(*evaluate_conditions(spec).lhs_dual, 0.35, 1e-15);
}

TEST(Classify, UsesSmallerCondition) {
  // f = 1 on B_1 in R^3: L^N side 1/3 is below the Lorentz side 1/2
  const auto rep = evaluate_conditions(ball(3, 1.0, 0, SourceSpec::constant(1)));
  EXPECT_NEAR(*rep.lhs_min(), 1.0 / 3, 1e-12);
  EXPECT_NEAR(*rep.lhs_Lorentz, 0.5, 1e-12);
}

TEST(Classify, LambdaOutsideHypothesisIsFlaggedNotRefused) {
  const auto rep = evaluate_conditions(ball(3, 1, 2.0, SourceSpec::constant(0)));
  EXPECT_TRUE(rep.lambda_outside_hypothesis);
  EXPECT_EQ(rep.regime, Regime::ExtremeBounded);
}

TEST(Validation, RejectsBadSpecs) {
  EXPECT_THROW(evaluate_conditions(ball(1, 1, 0, SourceSpec::constant(1))), DomainError);
  EXPECT_THROW(evaluate_conditions(ball(2, 1, -1, SourceSpec::constant(1))), DomainError);
  EXPECT_THROW(SourceSpec::power(1, 1.5), DomainError);
  EXPECT_THROW(SourceSpec::constant(-1), DomainError);
  EXPECT_THROW(SourceSpec::steps({0, 1}, {-2}), DomainError);
}

TEST(Box, MeasureOfBallIntersection) {
  Domain d;
  d.kind = DomainKind::Box;
  d.L = 1;
  EXPECT_NEAR(radial_measure(d, 2, 0.5), M_PI * 0.25, 1e-15);
  EXPECT_NEAR(radial_measure(d, 2, 2.0), 4.0, 1e-12);
  EXPECT_NEAR(radial_measure(d, 2, std::sqrt(2.0)), 4.0, 1e-12);
  // rho = 1.2: pi rho^2 minus four circular segments
  const double rho = 1.2, seg = rho * rho * std::acos(1 / rho) - std::sqrt(rho * rho - 1);
  EXPECT_NEAR(radial_measure(d, 2, rho), M_PI * rho * rho - 4 * seg, 1e-12);
}

TEST(Box, Norms) {
  // ||1||_{L^2} = 2L; ||r^{-1/2}||_{L^2}^2 = 8 L ln(1 + sqrt 2); ||c/r||_{L^{2,inf}} = c sqrt(pi)
  const double L = 1.5;
  EXPECT_NEAR(*source_LN_norm(box(L, 0, SourceSpec::constant(1))).value, 2 * L, 1e-12);
  EXPECT_NEAR(*source_LN_norm(box(L, 0, SourceSpec::power(1, 0.5))).value,
              std::sqrt(8 * L * std::log(1 + std::sqrt(2.0))), 1e-9);
  EXPECT_NEAR(*source_lorentz_norm(box(L, 0, SourceSpec::power(2, 1))).value, 2 * std::sqrt(M_PI), 1e-9);
}

TEST(Tabulated, SampledNormsAreStableUnderRefinement) {
  std::vector<double> r, v;
  for (int i = 0; i <= 20; ++i) {
    r.push_back(i / 20.0);
    v.push_back(1 + std::cos(3.0 * i / 20.0));
  }
  const auto spec = ball(3, 1, 0.4, SourceSpec::tabulated(r, v));
  const auto rep = evaluate_conditions(spec);
  EXPECT_EQ(rep.tol, 1e-4);
  // reference: S_3 ||f||_{L^3} by dense Gauss quadrature of the linear interpolant
  double acc = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double rr = (k + 0.5) / n;
    acc += std::pow(spec.f(rr), 3) * 4 * M_PI * rr * rr / n;
  }
  EXPECT_NEAR(*rep.sobolev_term, sobolev_constant(3) * std::cbrt(acc), 1e-4);
  EXPECT_EQ(rep.regime, classify(spec, rep));
}

TEST(Monotonicity, LambdaAndSource) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u01(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const int N = 2 + trial % 3;
    const double lam = u01(rng) * (N - 1), c = u01(rng), b = 0.9 * u01(rng);
    const auto base = evaluate_conditions(ball(N, 1, lam, SourceSpec::power(c, b)));
    const auto more_lambda = evaluate_conditions(ball(N, 1, lam + 0.1, SourceSpec::power(c, b)));
    const auto more_f = evaluate_conditions(ball(N, 1, lam, SourceSpec::power(c * 1.2, b)));
    EXPECT_LE(*base.lhs_LN, *more_lambda.lhs_LN);
    EXPECT_LE(*base.lhs_Lorentz, *more_lambda.lhs_Lorentz);
    EXPECT_LE(*base.lhs_LN, *more_f.lhs_LN);
    EXPECT_LE(*base.lhs_Lorentz, *more_f.lhs_Lorentz);
  }
}

#include "hlap/certificate.hpp"
#include "hlap/radial.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hlap;

namespace {

double sup_abs(const VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

// sigma r^{N-1} phi_p(u'(r)) + (mass of the right-hand side in B_r); zero for an exact solution
double flux_balance(const ClosedForm& cf, double r) {
  const auto spec = cf.problem();
  const double sigma = cf.N * unit_ball_volume(cf.N);
  return sigma * std::pow(r, cf.N - 1) * phi_p(cf.derivative(r), cf.p) + source_mass(spec, 0, r);
}

}  // namespace

TEST(Torsion, CenterValue) {
  EXPECT_NEAR(torsion(2, 1, 1.5, 0), 1.0 / 12, 1e-15);
  EXPECT_EQ(torsion(2, 1, 1.5, 1), 0.0);
  EXPECT_NEAR(torsion_center(3, 2, 1.5), std::pow(1.0 / 3, 2) * (1.0 / 3) * std::pow(2.0, 3), 1e-14);
  EXPECT_THROW(torsion(2, 1, 1.0, 0), DomainError);
  EXPECT_THROW(torsion(2, 1, 1.5, 1.1), DomainError);
}

TEST(Torsion, ClosedFormSolvesEquation) {
  for (double p : {1.2, 1.5, 1.8}) {
    const auto cf = ClosedForm::make_torsion(2, 1, p);
    for (int k = 1; k <= 100; ++k) EXPECT_LT(std::abs(flux_balance(cf, k / 100.0)), 1e-8);
  }
}

TEST(HardyLine, Values) {
  EXPECT_NEAR(hardy_line(3, 1, 0.5, 1.5, 0), 0.25, 1e-15);
  for (double p : {1.1, 1.5, 2.5})
    for (double r : {0.0, 0.3, 1.0}) EXPECT_NEAR(hardy_line(3, 2, 0.5, p, r), 1 - r, 1e-15);
  EXPECT_THROW(hardy_line(3, 0.5, 0.5, 1.5, 0), DomainError);
  EXPECT_THROW(hardy_line(3, 2.5, 0.5, 1.5, 0), DomainError);
}

TEST(HardyLine, ClosedFormSolvesEquation) {
  for (double a : {0.8, 1.0, 2.0}) {
    const auto cf = ClosedForm::make_hardy_line(3, a, 0.5, 1.5);
    for (int k = 1; k <= 100; ++k) EXPECT_LT(std::abs(flux_balance(cf, k / 100.0)), 1e-8);
  }
}

TEST(SingularFamily, Values) {
  EXPECT_EQ(singular_family(3, 1, 1), 0.0);
  EXPECT_NEAR(singular_family(3, 1, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(singular_family(3, 1e-12, 0.3), 0.0, 1e-10);
  EXPECT_THROW(singular_family(3, 2, 0.5), DomainError);
  EXPECT_THROW(singular_family(3, 0, 0.5), DomainError);
  EXPECT_THROW(singular_family(3, 1, 0), DomainError);
}

TEST(SingularFamily, CertificatePasses) {
  const auto v = verify(singular_power(3, 1));
  EXPECT_TRUE(v.all());
}

TEST(StrongResidual, ClosedFormsAtM512) {
  const auto tor = ClosedForm::make_torsion(2, 1, 1.5);
  const auto spec_t = tor.problem();
  EXPECT_LT(sup_abs(strong_residual(tor.sample(spec_t.radial_grid(512)), 1.5, spec_t)), 1e-3);
  const auto hl = ClosedForm::make_hardy_line(3, 1, 0.5, 1.5);
  const auto spec_h = hl.problem();
  EXPECT_LT(sup_abs(strong_residual(hl.sample(spec_h.radial_grid(512)), 1.5, spec_h)), 1e-3);
}

TEST(StrongResidual, ZeroData) {
  ProblemSpec s;
  s.N = 3;
  s.f = SourceSpec::constant(0);
  const auto g = s.radial_grid(64);
  EXPECT_EQ(sup_abs(strong_residual(RadialField(g, VectorXd::Zero(65)), 1.5, s)), 0.0);
}

TEST(StrongResidual, ConvergesUnderRefinement) {
  for (const auto& cf : {ClosedForm::make_torsion(2, 1, 1.5), ClosedForm::make_torsion(3, 2, 1.3),
                         ClosedForm::make_hardy_line(3, 1, 0.5, 1.5)}) {
    const auto spec = cf.problem();
    // the first cells sit at the roundoff floor of nodal differences, which
    // phi_p amplifies for p < 2; the rate is measured on r >= R/16
    double prev = 0;
    for (int M : {64, 128, 256, 512}) {
      const auto g = spec.radial_grid(M);
      const VectorXd res = strong_residual(cf.sample(g), cf.p, spec);
      double e = 0;
      for (int j = 0; j < M; ++j)
        if (g.midpoint(j) >= cf.R / 16) e = std::max(e, std::abs(res[j]));
      if (prev > 1e-13) EXPECT_LT(e, 0.55 * prev) << "M=" << M;
      prev = e;
    }
  }
}

TEST(Bvp, Torsion) {
  const auto cf = ClosedForm::make_torsion(2, 1, 1.5);
  const auto res = solve_radial_bvp(cf.problem(), 1.5);
  ASSERT_TRUE(res.converged);
  EXPECT_LT(res.residual, 1e-6);
  EXPECT_EQ(res.field.values[res.field.grid.M], 0.0);
  EXPECT_LT(sup_abs(res.field.values - cf.sample(res.field.grid).values), 1e-4);
}

TEST(Bvp, HardyLine) {
  for (double p : {1.2, 1.5}) {
    const auto cf = ClosedForm::make_hardy_line(3, 1, 0.5, p);
    const auto res = solve_radial_bvp(cf.problem(), p);
    EXPECT_LT(sup_abs(res.field.values - cf.sample(res.field.grid).values), 1e-4) << "p=" << p;
  }
}

TEST(Bvp, ZeroSourceGivesZero) {
  ProblemSpec s;
  s.N = 3;
  s.lambda = 0.05;
  s.f = SourceSpec::constant(0);
  const auto res = solve_radial_bvp(s, 1.5);
  EXPECT_EQ(sup_abs(res.field.values), 0.0);
  EXPECT_FALSE(res.coercivity_warning);
}

TEST(Bvp, Annulus) {
  // torsion on the annulus 0.5 < r < 1 in R^2 at p = 2 has a logarithmic closed form
  ProblemSpec s;
  s.N = 2;
  s.f = SourceSpec::constant(1);
  s.domain.kind = DomainKind::Annulus;
  s.domain.r_inner = 0.5;
  s.domain.R = 1;
  const double p = 1.99;
  const auto res = solve_radial_bvp(s, p);
  EXPECT_LT(std::abs(res.field.values[0]), 1e-12);
  // u = (1 - r^2)/4 + B ln r, B from u(0.5) = 0
  const double B = -(1 - 0.25) / 4 / std::log(0.5);
  const auto& g = res.field.grid;
  for (int i = 0; i <= g.M; i += 32)
    EXPECT_NEAR(res.field.values[i], (1 - g.nodes[i] * g.nodes[i]) / 4 + B * std::log(g.nodes[i]), 5e-3);
}

TEST(Bvp, Deterministic) {
  ProblemSpec s;
  s.N = 3;
  s.lambda = 0.3;
  s.f = SourceSpec::constant(1);
  const auto a = solve_radial_bvp(s, 1.4);
  const auto b = solve_radial_bvp(s, 1.4);
  EXPECT_EQ(a.field.values, b.field.values);
  EXPECT_EQ(a.residual_history, b.residual_history);
}

TEST(Bvp, ComparisonPrinciple) {
  for (double lambda : {0.1, 0.25}) {
    ProblemSpec s;
    s.N = 3;
    s.f = SourceSpec::constant(1);
    const auto v = solve_radial_bvp(s, 1.5);
    s.lambda = lambda;
    const auto u = solve_radial_bvp(s, 1.5);
    EXPECT_GE((u.field.values - v.field.values).minCoeff(), -1e-6) << "lambda=" << lambda;
  }
}

TEST(Bvp, CoercivityWarningAndFailure) {
  ProblemSpec s;
  s.N = 3;
  s.lambda = 1.5;  // far above ((N - p)/p)^p = 1 at p = 1.5
  s.f = SourceSpec::constant(1);
  BvpSettings st;
  st.max_iters = 10;
  try {
    const auto res = solve_radial_bvp(s, 1.5, st);
    EXPECT_TRUE(res.coercivity_warning);
  } catch (const SolverError& e) {
    EXPECT_FALSE(e.history.empty());
    EXPECT_NE(std::string(e.what()).find("coercivity"), std::string::npos);
  }
}

TEST(Bvp, RejectsBadExponent) {
  const auto spec = ClosedForm::make_torsion(2, 1, 1.5).problem();
  EXPECT_THROW(solve_radial_bvp(spec, 1.0), DomainError);
  EXPECT_THROW(solve_radial_bvp(spec, 2.0), DomainError);
}

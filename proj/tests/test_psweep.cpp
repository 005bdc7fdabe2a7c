#include "hlap/psweep.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hlap;

namespace {

ProblemSpec hardy_line_spec(int N, double a, double lambda) {
  return ClosedForm::make_hardy_line(N, a, lambda, 1.5).problem();
}

ProblemSpec torsion_spec(int N, double R, double lambda) {
  ProblemSpec s;
  s.N = N;
  s.lambda = lambda;
  s.f = SourceSpec::constant(1);
  s.domain.R = R;
  return s;
}

SweepSettings fast() {
  SweepSettings st;
  st.minimize.M = 256;
  return st;
}

}  // namespace

TEST(Schedule, Validation) {
  const auto spec = torsion_spec(3, 1, 0.5);
  SweepSchedule{}.validate(spec);
  EXPECT_THROW((SweepSchedule{{1.2, 1.3}}.validate(spec)), DomainError);
  EXPECT_THROW((SweepSchedule{{1.2, 1.0}}.validate(spec)), DomainError);
  EXPECT_THROW((SweepSchedule{{}}.validate(spec)), DomainError);
  // lambda = 0.9 violates ((N-p)/p)^p at p = 1.7 in R^3
  EXPECT_THROW((SweepSchedule{{1.7, 1.2}}.validate(torsion_spec(3, 1, 0.9))), DomainError);
}

TEST(Sweep, ExtremeHardyLineStaysAtOne) {
  const auto sw = run_sweep(hardy_line_spec(3, 2, 0.5), {}, fast());
  ASSERT_EQ(sw.records.size(), 7u);
  const auto& first = sw.records.front();
  for (const auto& r : sw.records) {
    ASSERT_FALSE(r.failed) << r.failure;
    EXPECT_NEAR(r.u_center, 1.0, 1e-3) << "p=" << r.p;
    EXPECT_GE(r.tv, 0.5 * first.tv);
    EXPECT_LE(r.tv, 2 * first.tv);
    EXPECT_GE(r.l1star_norm, 0.5 * first.l1star_norm);
    EXPECT_LE(r.l1star_norm, 2 * first.l1star_norm);
  }
  const auto rep = detect_regime(sw);
  EXPECT_EQ(rep.regime_observed, ObservedRegime::Bounded);
  ASSERT_TRUE(rep.limit_field.has_value());
  const auto& g = rep.limit_field->grid;
  for (int i = 0; i <= g.M; ++i) EXPECT_NEAR(rep.limit_field->values[i], 1 - g.nodes[i], 5e-3);
  for (const auto& b : bound_trace(sw.records, hardy_line_spec(3, 2, 0.5))) EXPECT_TRUE(b.ok);
}

TEST(Sweep, SubcriticalHardyLineVanishes) {
  const int N = 3;
  const double a = 0.9 * (N - 1);
  const auto spec = hardy_line_spec(N, a, 0.5);
  const auto sw = run_sweep(spec, {}, fast());
  for (const auto& r : sw.records) {
    ASSERT_FALSE(r.failed) << r.failure;
    EXPECT_NEAR(r.u_center, std::pow(a / (N - 1), 1 / (r.p - 1)), 1e-3) << "p=" << r.p;
  }
  EXPECT_EQ(detect_regime(sw).regime_observed, ObservedRegime::Vanishing);
  // strict condition: l1star below 1e-2 and decreasing over the last three records
  const auto& R = sw.records;
  EXPECT_LT(R.back().l1star_norm, 1e-2);
  EXPECT_LT(R[R.size() - 1].l1star_norm, R[R.size() - 2].l1star_norm);
  EXPECT_LT(R[R.size() - 2].l1star_norm, R[R.size() - 3].l1star_norm);
}

TEST(Sweep, LargeBallBlowsUp) {
  const auto spec = torsion_spec(2, 3, 0);
  const auto sw = run_sweep(spec, {}, fast());
  for (std::size_t k = 1; k < sw.records.size(); ++k)
    EXPECT_GT(sw.records[k].grad_energy_p, sw.records[k - 1].grad_energy_p);
  EXPECT_EQ(detect_regime(sw).regime_observed, ObservedRegime::BlowingUp);
  EXPECT_THROW(bound_trace(sw.records, spec), DomainError);
}

TEST(Sweep, YoungSplitPerRecord) {
  for (const auto& spec : {hardy_line_spec(3, 2, 0.5), torsion_spec(2, 3, 0), torsion_spec(3, 1, 0.4)}) {
    const auto sw = run_sweep(spec, {}, fast());
    for (const auto& r : sw.records)
      if (!r.failed) EXPECT_TRUE(young_split_holds(r, spec.measure())) << "p=" << r.p;
  }
}

TEST(Sweep, ComparisonWithLambdaZero) {
  SweepSchedule sched{{1.5, 1.3, 1.2, 1.1}};
  const auto with = run_sweep(torsion_spec(3, 1, 0.3), sched, fast());
  const auto without = run_sweep(torsion_spec(3, 1, 0), sched, fast());
  for (std::size_t k = 0; k < sched.p_values.size(); ++k)
    EXPECT_GE(with.records[k].grad_energy_p, without.records[k].grad_energy_p - 1e-6);
}

TEST(Sweep, BvpCrossCheck) {
  SweepSettings st = fast();
  st.cross_check = true;
  const auto sw = run_sweep(torsion_spec(3, 1, 0.3), SweepSchedule{{1.5, 1.3, 1.2}}, st);
  for (const auto& r : sw.records) {
    ASSERT_TRUE(r.bvp_gap.has_value());
    EXPECT_LT(*r.bvp_gap, 1e-3) << "p=" << r.p;
  }
}

TEST(Sweep, ZeroDataGivesZeroFlux) {
  ProblemSpec s = torsion_spec(3, 1, 0.2);
  s.f = SourceSpec::constant(0);
  const auto sw = run_sweep(s, SweepSchedule{{1.5, 1.2, 1.1}}, fast());
  for (const auto& r : sw.records) EXPECT_EQ(r.u_center, 0.0);
  const auto fl = extract_flux_limit(sw, s);
  EXPECT_EQ(fl.z.radial.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(fl.sup_ok);
}

TEST(FluxLimit, ExtremePairFamily) {
  // f = (1 - alpha)(N - 1)/|x| with lambda = alpha (N - 1): z -> -x/|x|
  const int N = 3;
  const double alpha = 0.25;
  const auto spec = hardy_line_spec(N, N - 1.0, alpha * (N - 1));
  const auto sw = run_sweep(spec, {}, fast());
  const auto fl = extract_flux_limit(sw, spec);
  EXPECT_DOUBLE_EQ(fl.p, 1.01);
  EXPECT_TRUE(fl.hypothesis);
  EXPECT_TRUE(fl.sup_ok);
  EXPECT_EQ(fl.flux_sup_trace.size(), 7u);
  const auto& g = fl.z.grid;
  for (int j = 0; j < g.M; ++j) EXPECT_NEAR(fl.z.radial[j], -1.0, 5e-2);
}

TEST(FluxLimit, NeedsTwoSolves) {
  const auto spec = hardy_line_spec(3, 2, 0.5);
  const auto sw = run_sweep(spec, SweepSchedule{{1.5}}, fast());
  EXPECT_THROW(extract_flux_limit(sw, spec), DomainError);
}

TEST(DetectRegime, NeedsThreeRecords) {
  std::vector<SweepRecord> r(2);
  EXPECT_EQ(detect_regime(r).regime_observed, ObservedRegime::Inconclusive);
}

TEST(DetectRegime, Thresholds) {
  auto rec = [](double p, double ge, double tv, double l1) {
    SweepRecord r;
    r.p = p;
    r.grad_energy_p = ge;
    r.tv = tv;
    r.l1star_norm = l1;
    return r;
  };
  // p - 1 halves twice over the last three records
  EXPECT_EQ(detect_regime({rec(1.04, 1, 1, 0.05), rec(1.02, 1, 1, 0.02), rec(1.01, 1, 1, 0.005)}).regime_observed,
            ObservedRegime::Vanishing);
  EXPECT_EQ(detect_regime({rec(1.04, 1, 1, 1), rec(1.02, 1.5, 1.1, 1), rec(1.01, 2.5, 1.2, 1)}).regime_observed,
            ObservedRegime::BlowingUp);
  EXPECT_EQ(detect_regime({rec(1.04, 1, 1, 1), rec(1.02, 1.02, 1.03, 1), rec(1.01, 1.05, 1.05, 1)}).regime_observed,
            ObservedRegime::Bounded);
  EXPECT_EQ(detect_regime({rec(1.04, 1, 1, 1), rec(1.02, 1.3, 1.2, 1), rec(1.01, 1.5, 1.4, 1)}).regime_observed,
            ObservedRegime::Inconclusive);
}

TEST(LimitConstant, KnownValues) {
  const auto c = limit_constant(2, 0.5);
  EXPECT_NEAR(c.closed_form, std::exp(2.0), 1e-12);
  EXPECT_NEAR(c.continued, std::exp(2.0), 1e-6 * std::exp(2.0));
  EXPECT_NEAR(limit_constant(3, 1e-9).closed_form, 1.0, 1e-8);
  EXPECT_NEAR(limit_bracket(3, 0, 1.2), 1.0, 1e-15);
  EXPECT_THROW(limit_constant(3, 2.0), DomainError);
  EXPECT_THROW(limit_constant(3, -0.1), DomainError);
}

TEST(LimitConstant, NegativeExponentInFiveDimensions) {
  const auto c = limit_constant(5, 1);
  EXPECT_LT(c.closed_form, 1.0);
  EXPECT_NEAR(limit_bracket(5, 1, 1 + 1e-6), c.closed_form, 1e-5 * c.closed_form);
  EXPECT_LT(c.relative_gap(), 1e-6);
  // the exponent of the opposite-sign variant is the negative of the closed form's
  EXPECT_NEAR(std::log(c.opposite_sign), -std::log(c.closed_form), 1e-12);
}

TEST(LimitConstant, GridAgreement) {
  for (int N : {2, 3, 4, 5, 6})
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const auto c = limit_constant(N, t * (N - 1));
      EXPECT_LT(c.relative_gap(), 1e-6) << "N=" << N << " t=" << t;
    }
}

TEST(BoundTrace, SmallSourceReducesToSobolevForm) {
  ProblemSpec s = torsion_spec(3, 0.5, 0);
  const auto sw = run_sweep(s, SweepSchedule{{1.5, 1.3, 1.2}}, fast());
  const auto checks = bound_trace(sw.records, s);
  ASSERT_EQ(checks.size(), 3u);
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const double p = sw.records[k].p;
    EXPECT_TRUE(checks[k].ok);
    EXPECT_NEAR(checks[k].rhs, std::pow(0.5 / 3, p / (p - 1)) * s.measure(), 1e-12 * checks[k].rhs);
  }
}

TEST(Sweep, FailureMarkersOnNonConvergence) {
  SweepSettings st = fast();
  st.minimize.max_iters = 1;
  st.minimize.grad_tol = 1e-30;
  const auto sw = run_sweep(torsion_spec(3, 1, 0.5), SweepSchedule{{1.3, 1.2}}, st);
  ASSERT_EQ(sw.records.size(), 2u);
  for (const auto& r : sw.records) {
    EXPECT_TRUE(r.failed);
    EXPECT_FALSE(r.failure.empty());
  }
}

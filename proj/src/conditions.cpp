#include "hlap/conditions.hpp"

#include <algorithm>
#include <cmath>

namespace hlap {

namespace {

constexpr int kSampleCells = 4096;

// Box [-L, L]^2 in polar form: on rho > L the arc inside the square is
// rho (2 pi - 8 acos(L/rho)); rho = L / cos(theta) makes the integrand smooth.
template <class F>
double box_outer_integral(double L, F&& g) {
  const auto& rule = gauss8();
  const double top = M_PI / 4;
  double s = 0;
  const int pieces = 8;
  for (int k = 0; k < pieces; ++k) {
    s += rule.integrate(
        [&](double th) {
          const double rho = L / std::cos(th);
          const double drho = L * std::sin(th) / (std::cos(th) * std::cos(th));
          return g(rho) * rho * (2 * M_PI - 8 * th) * drho;
        },
        top * k / pieces, top * (k + 1) / pieces);
  }
  return s;
}

double inner_radius(const Domain& d) { return d.kind == DomainKind::Annulus ? d.r_inner : 0.0; }

SampledFunction<double> sampled_source(const ProblemSpec& spec) {
  const double lo = inner_radius(spec.domain), hi = spec.domain.outer_radius();
  VectorXd v(kSampleCells), m(kSampleCells);
  double prev = radial_measure(spec.domain, spec.N, lo);
  for (int k = 0; k < kSampleCells; ++k) {
    const double a = lo + (hi - lo) * k / kSampleCells, b = lo + (hi - lo) * (k + 1) / kSampleCells;
    const double cur = radial_measure(spec.domain, spec.N, b);
    v[k] = spec.f(0.5 * (a + b));
    m[k] = cur - prev;
    prev = cur;
  }
  return SampledFunction<double>(v, m);
}

SampledFunction<double> step_source(const ProblemSpec& spec) {
  const auto& f = spec.f;
  VectorXd v(f.values.size()), m(f.values.size());
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    v[k] = f.values[k];
    m[k] = radial_measure(spec.domain, spec.N, f.edges[k + 1]) -
           radial_measure(spec.domain, spec.N, f.edges[k]);
  }
  if (!(m.sum() > 0)) {
    v = VectorXd::Zero(1);
    m = VectorXd::Constant(1, spec.measure());
  }
  return SampledFunction<double>(v, m);
}

}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::VanishPredicted: return "VanishPredicted";
    case Regime::ExtremeBounded: return "ExtremeBounded";
    case Regime::BlowupExpected: return "BlowupExpected";
    case Regime::Unknown: return "Unknown";
  }
  return "Unknown";
}

double radial_measure(const Domain& d, int N, double rho) {
  rho = std::max(rho, 0.0);
  switch (d.kind) {
    case DomainKind::Ball:
    case DomainKind::Disk:
      return unit_ball_volume(N) * std::pow(std::min(rho, d.R), N);
    case DomainKind::Annulus: {
      const double r = std::clamp(rho, d.r_inner, d.R);
      return unit_ball_volume(N) * (std::pow(r, N) - std::pow(d.r_inner, N));
    }
    case DomainKind::Box: {
      const double L = d.L;
      if (rho <= L) return M_PI * rho * rho;
      if (rho >= std::sqrt(2.0) * L) return 4 * L * L;
      return M_PI * rho * rho - 4 * rho * rho * std::acos(L / rho) + 4 * L * std::sqrt(rho * rho - L * L);
    }
  }
  return 0;
}

NormValue source_LN_norm(const ProblemSpec& spec) {
  const auto& f = spec.f;
  const auto& d = spec.domain;
  const int N = spec.N;
  NormValue out;
  switch (f.kind) {
    case SourceSpec::Kind::Constant:
      out.value = f.c * std::pow(spec.measure(), 1.0 / N);
      return out;
    case SourceSpec::Kind::Power: {
      if (f.c == 0) {
        out.value = 0;
        return out;
      }
      double integral;
      if (d.kind == DomainKind::Box) {
        integral = 2 * M_PI * power_integral(0, d.L, 1 - 2 * f.b);
        if (std::isfinite(integral))
          integral += box_outer_integral(d.L, [&](double r) { return std::pow(r, -2 * f.b); });
      } else {
        integral = N * unit_ball_volume(N) * power_integral(inner_radius(d), d.R, N - 1 - f.b * N);
      }
      if (!std::isfinite(integral)) {
        out.note = "not in L^N";
        return out;
      }
      out.value = f.c * std::pow(integral, 1.0 / N);
      return out;
    }
    case SourceSpec::Kind::Steps:
      out.value = lebesgue_norm(step_source(spec), double(N));
      return out;
    case SourceSpec::Kind::Tabulated:
      out.closed_form = false;
      out.value = lebesgue_norm(sampled_source(spec), double(N));
      return out;
  }
  return out;
}

NormValue source_lorentz_norm(const ProblemSpec& spec) {
  const auto& f = spec.f;
  const auto& d = spec.domain;
  const int N = spec.N;
  NormValue out;
  const auto weak = LorentzIndex::weak(N);
  switch (f.kind) {
    case SourceSpec::Kind::Constant:
      out.value = f.c * std::pow(spec.measure(), 1.0 / N);
      return out;
    case SourceSpec::Kind::Power: {
      if (d.kind != DomainKind::Box) {
        // rho^{-b} |Omega cap B_rho|^{1/N} increases in rho for b <= 1
        out.value = f.c * std::pow(d.R, -f.b) * std::pow(spec.measure(), 1.0 / N);
        return out;
      }
      auto g = [&](double th) {
        const double rho = d.L / std::cos(th);
        return std::pow(rho, -f.b) * std::sqrt(radial_measure(d, N, rho));
      };
      const int scan = 2000;
      int best = 0;
      double top = -1;
      for (int k = 0; k <= scan; ++k) {
        const double v = g(M_PI / 4 * k / scan);
        if (v > top) top = v, best = k;
      }
      double lo = M_PI / 4 * std::max(best - 1, 0) / scan, hi = M_PI / 4 * std::min(best + 1, scan) / scan;
      const double phi = 0.5 * (std::sqrt(5.0) - 1);
      for (int it = 0; it < 100; ++it) {
        const double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        if (g(x1) < g(x2)) lo = x1; else hi = x2;
      }
      out.value = f.c * std::max(top, g(0.5 * (lo + hi)));
      return out;
    }
    case SourceSpec::Kind::Steps:
      out.value = lorentz_norm(step_source(spec), weak);
      return out;
    case SourceSpec::Kind::Tabulated:
      out.closed_form = false;
      out.value = lorentz_norm(sampled_source(spec), weak);
      return out;
  }
  return out;
}

std::optional<double> check_LN(const ProblemSpec& spec) {
  const auto n = source_LN_norm(spec);
  if (!n.value) return std::nullopt;
  return sobolev_constant(spec.N) * *n.value + spec.lambda / (spec.N - 1);
}

double check_Lorentz(const ProblemSpec& spec) {
  return gamma_constant(spec.N) * *source_lorentz_norm(spec).value + spec.lambda / (spec.N - 1);
}

std::optional<double> ConditionReport::lhs_min() const {
  std::optional<double> m;
  for (const auto& v : {lhs_LN, lhs_Lorentz, lhs_dual})
    if (v) m = m ? std::min(*m, *v) : *v;
  return m;
}

Regime classify(const ProblemSpec& spec, const ConditionReport& report) {
  const auto m = report.lhs_min();
  if (!m) return Regime::Unknown;
  if (*m < 1 - report.tol) return Regime::VanishPredicted;
  if (std::abs(*m - 1) <= report.tol) return Regime::ExtremeBounded;
  if (report.sobolev_term && *report.sobolev_term > 1 + report.tol && !spec.f.is_zero())
    return Regime::BlowupExpected;
  return Regime::Unknown;
}

ConditionReport evaluate_conditions(const ProblemSpec& spec) {
  spec.validate();
  ConditionReport rep;
  const double c = spec.lambda / (spec.N - 1);
  const auto ln = source_LN_norm(spec);
  const auto lz = source_lorentz_norm(spec);
  if (ln.value) {
    rep.sobolev_term = sobolev_constant(spec.N) * *ln.value;
    rep.lhs_LN = *rep.sobolev_term + c;
  } else {
    rep.note = "f is not in L^N; the L^N condition is skipped";
  }
  rep.lhs_Lorentz = gamma_constant(spec.N) * *lz.value + c;
  if (spec.dual_norm_f) rep.lhs_dual = *spec.dual_norm_f + c;
  rep.tol = (ln.closed_form && lz.closed_form) ? 1e-9 : 1e-4;
  rep.lambda_outside_hypothesis = spec.lambda_outside_hypothesis();
  rep.regime = classify(spec, rep);
  return rep;
}

}  // namespace hlap

#include "hlap/psweep.hpp"
#include "hlap/conditions.hpp"

#include <algorithm>
#include <cmath>

namespace hlap {

void SweepSchedule::validate(const ProblemSpec& spec) const {
  if (p_values.empty()) throw DomainError("schedule: empty");
  for (std::size_t k = 0; k < p_values.size(); ++k) {
    if (!(p_values[k] > 1)) throw DomainError("schedule: every p must exceed 1");
    if (k && !(p_values[k] < p_values[k - 1])) throw DomainError("schedule: p values must strictly decrease");
    if (!spec.coercive(p_values[k])) throw DomainError("schedule: lambda >= ((N-p)/p)^p at some p");
    if (!(p_values[k] < spec.N)) throw DomainError("schedule: p must stay below N");
  }
}

SweepRecord make_record(const SolveResult& s, double p, const ProblemSpec& spec) {
  SweepRecord r;
  r.p = p;
  const double q = double(spec.N) / (spec.N - 1);
  if (s.planar) {
    r.grad_energy_p = p_energy(s.field2d, p);
    r.tv = total_variation(s.field2d);
    r.l1star_norm = lebesgue_norm(sampled(s.field2d), q);
    r.flux_sup = flux(s.field2d, p).sup_norm();
  } else {
    r.grad_energy_p = p_energy(s.field, p);
    r.tv = total_variation(s.field);
    r.l1star_norm = lp_norm(s.field, q);
    r.flux_sup = s.radial_flux(p).sup_norm();
  }
  r.u_center = s.u_center();
  return r;
}

namespace {

// Hardy-line data (source form, f = c/|x| on the unit ball) scale like
// (a/(N-1))^{1/(p-1)}; other specs warm-start unscaled.
double warm_scale(const ProblemSpec& spec, double p_prev, double p) {
  if (spec.hardy_term != HardyTerm::Source || spec.f.kind != SourceSpec::Kind::Power || spec.f.b != 1 ||
      spec.domain.kind != DomainKind::Ball || spec.domain.R != 1)
    return 1;
  const double a = spec.f.c + spec.lambda;
  if (!(a > 0)) return 1;
  return std::pow(a / (spec.N - 1), 1 / (p - 1) - 1 / (p_prev - 1));
}

}  // namespace

SweepResult run_sweep(const ProblemSpec& spec, const SweepSchedule& schedule, const SweepSettings& st) {
  spec.validate();
  schedule.validate(spec);
  SweepResult out;
  std::optional<SolveResult> last;
  double p_last = 0;
  for (double p : schedule.p_values) {
    SolveResult s;
    SweepRecord rec;
    try {
      SolveResult warm;
      const SolveResult* init = nullptr;
      if (last) {
        warm = *last;
        const double k = warm_scale(spec, p_last, p);
        if (warm.planar) warm.field2d.values *= k; else warm.field.values *= k;
        init = &warm;
      }
      s = n_continuation(spec, p, st.minimize, init);
      rec = make_record(s, p, spec);
      if (!s.converged) {
        rec.failed = true;
        rec.failure = "minimizer did not reach grad_tol";
      }
      if (st.cross_check && spec.domain.radial()) {
        try {
          const auto b = solve_radial_bvp(spec, p, s.field.grid, st.bvp);
          // measured in L^{N/(N-1)}: with the Hardy potential the profile is
          // unbounded at the origin and the two schemes differ on the first cells
          const double q = double(spec.N) / (spec.N - 1);
          const double scale = std::max(1e-300, rec.l1star_norm);
          rec.bvp_gap = lp_norm(RadialField(s.field.grid, b.field.values - s.field.values), q) / scale;
        } catch (const SolverError&) {
          rec.bvp_gap.reset();
        }
      }
    } catch (const std::exception& e) {
      rec = SweepRecord{};
      rec.p = p;
      rec.failed = true;
      rec.failure = e.what();
      s = SolveResult{};
    }
    if (!rec.failed) {
      last = s;
      p_last = p;
    }
    out.records.push_back(rec);
    out.solves.push_back(std::move(s));
  }
  return out;
}

const char* observed_regime_name(ObservedRegime r) {
  switch (r) {
    case ObservedRegime::Vanishing: return "Vanishing";
    case ObservedRegime::Bounded: return "Bounded";
    case ObservedRegime::BlowingUp: return "BlowingUp";
    case ObservedRegime::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

double loglog_slope(const std::vector<SweepRecord>& rs, double SweepRecord::*field) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : rs) {
    const double y = r.*field;
    if (!(y > 0) || !(r.p > 1)) continue;
    const double x = std::log(r.p - 1), ly = std::log(y);
    sx += x, sy += ly, sxx += x * x, sxy += x * ly;
    ++n;
  }
  if (n < 2) return 0;
  const double den = n * sxx - sx * sx;
  return den != 0 ? (n * sxy - sx * sy) / den : 0.0;
}

double spread(double a, double b, double c) {
  const double hi = std::max({a, b, c}), lo = std::min({a, b, c});
  return hi > 0 ? (hi - lo) / hi : 0.0;
}

}  // namespace

AsymptoticReport detect_regime(const std::vector<SweepRecord>& all) {
  std::vector<SweepRecord> rs;
  for (const auto& r : all)
    if (!r.failed) rs.push_back(r);
  AsymptoticReport rep;
  if (rs.size() < 3) {
    rep.detail = "fewer than three converged records";
    return rep;
  }
  rep.slope_l1star = loglog_slope(rs, &SweepRecord::l1star_norm);
  rep.slope_grad_energy = loglog_slope(rs, &SweepRecord::grad_energy_p);

  const auto& last = rs.back();
  // reference record two halvings of (p - 1) before the last one
  const double target = 4 * (last.p - 1);
  std::size_t ref = 0;
  for (std::size_t k = 0; k + 1 < rs.size(); ++k)
    if (std::abs(rs[k].p - 1 - target) < std::abs(rs[ref].p - 1 - target)) ref = k;
  const auto& r0 = rs[ref];
  const auto& a = rs[rs.size() - 3];
  const auto& b = rs[rs.size() - 2];

  if (last.l1star_norm < 1e-2 && r0.l1star_norm >= 2 * last.l1star_norm) {
    rep.regime_observed = ObservedRegime::Vanishing;
    rep.detail = "l1star_norm below 1e-2 and halved over two halvings of p-1";
  } else if (last.grad_energy_p >= 2 * r0.grad_energy_p) {
    rep.regime_observed = ObservedRegime::BlowingUp;
    rep.detail = "grad_energy_p doubled over two halvings of p-1";
  } else if (spread(a.grad_energy_p, b.grad_energy_p, last.grad_energy_p) < 0.1 &&
             spread(a.tv, b.tv, last.tv) < 0.1) {
    rep.regime_observed = ObservedRegime::Bounded;
    rep.detail = "grad_energy_p and tv flat within 10% over the last three records";
  } else {
    rep.detail = "no threshold met";
  }
  return rep;
}

AsymptoticReport detect_regime(const SweepResult& sweep) {
  AsymptoticReport rep = detect_regime(sweep.records);
  std::vector<const SolveResult*> ok;
  for (std::size_t k = 0; k < sweep.records.size(); ++k)
    if (!sweep.records[k].failed && !sweep.solves[k].planar) ok.push_back(&sweep.solves[k]);
  if (ok.size() >= 2) {
    const auto& x = ok[ok.size() - 2]->field;
    const auto& y = ok.back()->field;
    if (x.grid.M == y.grid.M && x.grid.nodes == y.grid.nodes)
      rep.limit_field = RadialField(y.grid, 0.5 * (x.values + y.values));
  }
  return rep;
}

double limit_bracket(int N, double lambda, double p) {
  if (!(lambda >= 0) || !(lambda < N - 1)) throw DomainError("limit_bracket: need 0 <= lambda < N - 1");
  if (!(p > 1) || !(p < N)) throw DomainError("limit_bracket: need 1 < p < N");
  if (lambda == 0) return 1;
  const double eps = p - 1;
  const double c = 1.0 / (N - 1);
  // log(h_p / c) with h_p = (p/(N-p))^p, expanded around p = 1
  const double E = (1 + eps) * std::log1p(eps) - eps * std::log(N - 1.0) - (1 + eps) * std::log1p(-eps / (N - 1));
  const double c_minus_h = -c * std::expm1(E);
  const double ell = -std::log1p(lambda * c_minus_h / (1 - lambda * c));
  return std::exp(p / eps * ell);
}

LimitConstant limit_constant(int N, double lambda) {
  if (N < 2) throw DomainError("limit_constant: N must be >= 2");
  if (!(lambda >= 0) || !(lambda < N - 1)) throw DomainError("limit_constant: need 0 <= lambda < N - 1");
  LimitConstant out;
  const double ex = lambda * (double(N) / (N - 1) - std::log(N - 1.0)) / (N - 1 - lambda);
  out.closed_form = std::exp(ex);
  out.opposite_sign = std::exp(-ex);
  std::vector<double> x, y;
  for (int k = 3; k <= 6; ++k) {
    x.push_back(std::pow(10.0, -k));
    y.push_back(limit_bracket(N, lambda, 1 + x.back()));
  }
  out.samples = y;
  out.raw = y.back();
  // Neville extrapolation to p - 1 = 0
  std::vector<double> t = y;
  for (std::size_t m = 1; m < t.size(); ++m)
    for (std::size_t i = t.size() - 1; i >= m; --i)
      t[i] = (x[i - m] * t[i] - x[i] * t[i - 1]) / (x[i - m] - x[i]);
  out.continued = t.back();
  return out;
}

std::vector<BoundCheck> bound_trace(const std::vector<SweepRecord>& records, const ProblemSpec& spec) {
  const auto rep = evaluate_conditions(spec);
  const auto m = rep.lhs_min();
  if (!m || *m > 1 + rep.tol) throw DomainError("bound_trace: hypothesis not satisfied");
  std::vector<BoundCheck> out;
  for (const auto& r : records) {
    // the data term S_N ||f|| (or gamma ||f||) in place of its bound 1 - lambda/(N-1) under the smallness condition
    BoundCheck b = apriori_bound(spec, r.p);
    b.lhs = r.grad_energy_p;
    b.ok = !r.failed && b.lhs <= b.rhs * (1 + 1e-6);
    out.push_back(b);
  }
  return out;
}

bool young_split_holds(const SweepRecord& r, double measure, double slack) {
  const double rhs = r.grad_energy_p / r.p + (r.p - 1) * measure / r.p;
  return r.tv <= rhs + slack * std::max(1.0, rhs);
}

FluxLimit extract_flux_limit(const SweepResult& sweep, const ProblemSpec& spec) {
  std::vector<std::size_t> ok;
  for (std::size_t k = 0; k < sweep.records.size(); ++k)
    if (!sweep.records[k].failed && !sweep.solves[k].planar) ok.push_back(k);
  if (ok.size() < 2) throw DomainError("extract_flux_limit: need at least two converged radial solves");
  FluxLimit out;
  for (std::size_t k : ok) out.flux_sup_trace.push_back(sweep.records[k].flux_sup);
  const std::size_t last = ok.back();
  out.p = sweep.records[last].p;
  out.z = sweep.solves[last].radial_flux(out.p);
  const auto rep = evaluate_conditions(spec);
  const auto m = rep.lhs_min();
  out.hypothesis = m && *m <= 1 + rep.tol;
  out.sup_ok = !out.hypothesis || out.flux_sup_trace.back() <= 1.05;
  return out;
}

}  // namespace hlap

#include "hlap/minimizer.hpp"
#include "hlap/conditions.hpp"
#include "hlap/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hlap {

double truncated_weight(double r, double p, double n) {
  if (!(n > 0)) throw DomainError("truncated_weight: n must be positive");
  if (r == 0) return n;
  return std::min(std::pow(r, -p), n);
}

VectorXd hardy_cell_weights(const RadialGrid& g, double p, double n) {
  const double sigma = g.N * unit_ball_volume(g.N);
  // W_n = n on r < r_n = n^{-1/p}
  const double rn = std::isinf(n) ? 0.0 : std::pow(n, -1 / p);
  VectorXd w(g.M);
  for (int j = 0; j < g.M; ++j) {
    const double a = g.nodes[j], b = g.nodes[j + 1];
    const double cut = std::clamp(rn, a, b);
    double s = 0;
    if (cut > a) s += n * (std::pow(cut, g.N) - std::pow(a, g.N)) / g.N;
    if (b > cut) s += power_integral(cut, b, g.N - 1 - p);
    w[j] = sigma * s;
  }
  return w;
}

VectorXd load_vector(const ProblemSpec& spec, const RadialGrid& g) {
  const double lam = spec.hardy_term == HardyTerm::Source ? spec.lambda : 0.0;
  const double sigma = g.N * unit_ball_volume(g.N);
  const auto segs = with_inverse_r(spec.f, lam, g.nodes[0], g.R);
  VectorXd l = VectorXd::Zero(g.M + 1);
  for (int j = 0; j < g.M; ++j) {
    const double a = g.nodes[j], b = g.nodes[j + 1], d = b - a;
    const double m0 = segments_moment(segs, a, b, g.N - 1);
    const double m1 = segments_moment(segs, a, b, g.N);
    l[j] += sigma * (b * m0 - m1) / d;
    l[j + 1] += sigma * (m1 - a * m0) / d;
  }
  return l;
}

namespace {

struct RadialSystem {
  RadialGrid g;
  VectorXd V, width, load, omega;
  double p, beta;
  bool annulus;

  RadialSystem(const ProblemSpec& spec, const RadialGrid& grid, double pp, double bb, double n)
      : g(grid), p(pp), beta(bb) {
    V = cell_measures(g);
    width = g.nodes.tail(g.M) - g.nodes.head(g.M);
    load = load_vector(spec, g);
    omega = beta != 0 ? hardy_cell_weights(g, p, n) : VectorXd::Zero(g.M);
    annulus = g.annulus();
    mask_dirichlet(load);
  }

  void mask_dirichlet(VectorXd& v) const {
    v[g.M] = 0;
    if (annulus) v[0] = 0;
  }

  double convex(const VectorXd& u) const {
    const VectorXd s = (u.tail(g.M) - u.head(g.M)).cwiseQuotient(width);
    return s.array().abs().pow(p).matrix().dot(V) / p;
  }
  double concave(const VectorXd& u) const {
    if (beta == 0) return 0;
    const VectorXd m = 0.5 * (u.head(g.M) + u.tail(g.M));
    return beta * m.array().abs().pow(p).matrix().dot(omega) / p;
  }
  double energy(const VectorXd& u) const { return convex(u) - concave(u) - load.dot(u); }

  // Gradient of (1/p) int W_n |u|^p (without beta).
  VectorXd hardy_part(const VectorXd& u) const {
    VectorXd h = VectorXd::Zero(g.M + 1);
    if (beta == 0) return h;
    for (int j = 0; j < g.M; ++j) {
      const double t = 0.5 * omega[j] * phi_p(0.5 * (u[j] + u[j + 1]), p);
      h[j] += t;
      h[j + 1] += t;
    }
    mask_dirichlet(h);
    return h;
  }

  VectorXd slopes(const VectorXd& u) const { return (u.tail(g.M) - u.head(g.M)).cwiseQuotient(width); }

  // From cell fluxes phi(u') directly: near the origin of a large profile the
  // slopes fall below the resolution of nodal differences, or underflow.
  VectorXd convex_gradient_from(const VectorXd& q) const {
    VectorXd gr = VectorXd::Zero(g.M + 1);
    for (int j = 0; j < g.M; ++j) {
      const double F = V[j] * q[j] / width[j];
      gr[j] -= F;
      gr[j + 1] += F;
    }
    mask_dirichlet(gr);
    return gr;
  }
  VectorXd cell_flux(const VectorXd& u) const {
    VectorXd q = slopes(u);
    for (auto& v : q) v = phi_p(v, p);
    return q;
  }
  VectorXd convex_gradient(const VectorXd& u) const { return convex_gradient_from(cell_flux(u)); }

  VectorXd gradient(const VectorXd& u) const {
    VectorXd gr = convex_gradient(u) - load;
    if (beta != 0) gr -= beta * hardy_part(u);
    mask_dirichlet(gr);
    return gr;
  }

  // Minimizer of (1/p) int |u'|^p - b.u: node balance F_{j-1} - F_j = b_j with
  // F_j = V_j phi(g_j)/width_j, integrated inward from u_M = 0.
  VectorXd convex_solve(const VectorXd& b, VectorXd& qf) const {
    qf.resize(g.M);
    auto profile = [&](double c) {
      VectorXd u(g.M + 1);
      u[g.M] = 0;
      VectorXd F(g.M);
      double acc = c;
      for (int j = 0; j < g.M; ++j) {
        if (!(annulus && j == 0)) acc -= b[j];
        F[j] = acc;
      }
      for (int j = g.M - 1; j >= 0; --j) {
        const double q = F[j] * width[j] / V[j];
        const double s = q == 0 ? 0.0 : (q > 0 ? 1.0 : -1.0) * std::pow(std::abs(q), 1 / (p - 1));
        qf[j] = q;
        u[j] = u[j + 1] - width[j] * s;
      }
      return u;
    };
    if (!annulus) return profile(0);
    // u_0 decreases in the inner flux constant c
    double lo = -1, hi = 1;
    while (profile(lo)[0] < 0) lo *= 2;
    while (profile(hi)[0] > 0) hi *= 2;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (profile(mid)[0] > 0) lo = mid; else hi = mid;
      if (hi - lo <= 1e-16 * std::max(1.0, std::abs(mid))) break;
    }
    VectorXd u = profile(0.5 * (lo + hi));
    u[0] = 0;
    return u;
  }

  double relative_gradient(const VectorXd& u, const VectorXd& qf) const {
    const VectorXd h = beta * hardy_part(u);
    VectorXd gr = convex_gradient_from(qf) - load - h;
    mask_dirichlet(gr);
    const double scale = load.norm() + h.norm();
    const double gn = gr.norm();
    return scale > 0 ? gn / scale : gn;
  }
};

}  // namespace

double energy_J(const RadialField& u, double p, double beta, double n, const ProblemSpec& spec) {
  if (!(beta >= 0)) throw DomainError("energy_J: beta must be nonnegative");
  if (!(p > 1) || !(p < spec.N)) throw DomainError("energy_J: need 1 < p < N");
  return RadialSystem(spec, u.grid, p, beta, n).energy(u.values);
}

VectorXd energy_gradient(const RadialField& u, double p, double beta, double n, const ProblemSpec& spec) {
  if (!(beta >= 0)) throw DomainError("energy_gradient: beta must be nonnegative");
  if (!(p > 1) || !(p < spec.N)) throw DomainError("energy_gradient: need 1 < p < N");
  return RadialSystem(spec, u.grid, p, beta, n).gradient(u.values);
}

double SolveResult::u_center() const {
  if ((planar ? field2d.values.size() : field.values.size()) == 0) throw DomainError("u_center: result carries no field");
  return planar ? field2d.center() : field.values[0];
}

RadialVectorField SolveResult::radial_flux(double p) const {
  if (cell_flux.size() == field.grid.M) return {field.grid, cell_flux};
  return flux(field, p);
}

double SolveResult::grad_energy(double p) const {
  return planar ? p_energy(field2d, p) : p_energy(field, p);
}

BoundCheck apriori_bound(const ProblemSpec& spec, double p) {
  BoundCheck b;
  const double pp = p / (p - 1);
  const auto ln = source_LN_norm(spec);
  const auto lz = source_lorentz_norm(spec);
  double data = gamma_constant(spec.N) * *lz.value;
  b.variant = "lorentz";
  if (ln.value && sobolev_constant(spec.N) * *ln.value <= data) {
    data = sobolev_constant(spec.N) * *ln.value;
    b.variant = "lebesgue";
  }
  double base;
  if (spec.hardy_term == HardyTerm::Potential) {
    const double den = 1 - spec.lambda * hardy_multiplier(spec.N, p);
    if (!(den > 0)) throw CoercivityLost("lambda violates the Hardy coercivity bound at this p");
    base = data / den;
  } else {
    base = data + spec.lambda / (spec.N - 1);
  }
  b.rhs = std::pow(base, pp) * spec.measure();
  return b;
}

BoundCheck verify_apriori_bound(const SolveResult& result, const ProblemSpec& spec, double p) {
  BoundCheck b = apriori_bound(spec, p);
  b.lhs = result.grad_energy(p);
  b.ok = b.lhs <= b.rhs * (1 + 1e-6);
  return b;
}

SolveResult minimize_2d(const ProblemSpec& spec, double p, double n, const MinimizeSettings& st,
                        const SolveResult* initial);

SolveResult minimize(const ProblemSpec& spec, double p, double n, const MinimizeSettings& st,
                     const SolveResult* initial) {
  spec.validate();
  if (!(p > 1) || !(p < spec.N)) throw DomainError("minimize: need 1 < p < N");
  if (!spec.coercive(p)) throw CoercivityLost("lambda >= ((N-p)/p)^p: the energy is not coercive");
  if (!spec.domain.radial()) return minimize_2d(spec, p, n, st, initial);

  const RadialGrid grid = (initial && !initial->planar) ? initial->field.grid : spec.radial_grid(st.M, st.grading);
  const double beta = hardy_beta(spec);
  RadialSystem sys(spec, grid, p, beta, n);
  const double limit = 10 * apriori_bound(spec, p).rhs;

  SolveResult res;
  VectorXd u = (initial && !initial->planar) ? initial->field.values : VectorXd::Zero(grid.M + 1);
  sys.mask_dirichlet(u);
  res.energy_trace.push_back(sys.energy(u));
  VectorXd qf = sys.cell_flux(u);
  double rel = sys.relative_gradient(u, qf);
  int it = 0;
  while (rel > st.grad_tol && it < st.max_iters) {
    VectorXd next = sys.convex_solve(sys.load + beta * sys.hardy_part(u), qf);
    ++it;
    if (!next.allFinite()) throw CoercivityLost("iterate left the representable range");
    const double e = sys.energy(next);
    u = std::move(next);
    res.energy_trace.push_back(e);
    rel = sys.relative_gradient(u, qf);
    if (sys.convex(u) * p > limit) throw CoercivityLost("iterate exceeds ten times the a priori bound");
  }
  res.field = RadialField(grid, u);
  res.cell_flux = qf;
  res.energy = res.energy_trace.back();
  res.grad_norm = rel;
  res.iterations = it;
  res.n_used = n;
  res.converged = rel <= st.grad_tol;
  res.negativity_flag = u.minCoeff() < -1e-8;
  const auto b = verify_apriori_bound(res, spec, p);
  res.bound_B_ok = b.ok;
  res.bound_B_lhs = b.lhs;
  res.bound_B_rhs = b.rhs;
  res.bound_variant = b.variant;
  return res;
}

SolveResult n_continuation(const ProblemSpec& spec, double p, const MinimizeSettings& st,
                           const SolveResult* initial) {
  if (st.n_schedule.empty()) throw DomainError("n_continuation: empty schedule");
  for (std::size_t k = 1; k < st.n_schedule.size(); ++k)
    if (!(st.n_schedule[k] > st.n_schedule[k - 1])) throw DomainError("n_continuation: schedule must increase");
  SolveResult cur = minimize(spec, p, st.n_schedule[0], st, initial);
  if (hardy_beta(spec) == 0) return cur;
  for (std::size_t k = 1; k < st.n_schedule.size(); ++k) {
    SolveResult next = minimize(spec, p, st.n_schedule[k], st, &cur);
    const VectorXd& a = cur.planar ? cur.field2d.values : cur.field.values;
    const VectorXd& b = next.planar ? next.field2d.values : next.field.values;
    const double diff = (a - b).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    cur = std::move(next);
    if (diff < 1e-6 * scale) break;
  }
  return cur;
}

}  // namespace hlap

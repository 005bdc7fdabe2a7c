#include "hlap/radial.hpp"

#include <algorithm>
#include <cmath>

namespace hlap {

double torsion_center(int N, double R, double p) {
  if (!(p > 1)) throw DomainError("torsion: p must exceed 1");
  const double pp = p / (p - 1);
  return std::pow(1.0 / N, 1 / (p - 1)) * ((p - 1) / p) * std::pow(R, pp);
}

double torsion(int N, double R, double p, double r) {
  if (!(p > 1) || !(p < N)) throw DomainError("torsion: need 1 < p < N");
  if (r < 0 || r > R) throw DomainError("torsion: r outside [0, R]");
  return torsion_center(N, R, p) * (1 - std::pow(r / R, p / (p - 1)));
}

double torsion_derivative(int N, double R, double p, double r) {
  if (!(p > 1)) throw DomainError("torsion: p must exceed 1");
  return -torsion_center(N, R, p) * p / ((p - 1) * R) * std::pow(r / R, 1 / (p - 1));
}

double hardy_line(int N, double a, double lambda, double p, double r) {
  if (!(a > lambda)) throw DomainError("hardy_line: need a > lambda");
  if (a > N - 1) throw DomainError("hardy_line: need a <= N - 1");
  if (!(p > 1) || !(p < N)) throw DomainError("hardy_line: need 1 < p < N");
  if (r < 0 || r > 1) throw DomainError("hardy_line: r outside [0, 1]");
  return (1 - r) * std::pow(a / (N - 1), 1 / (p - 1));
}

double singular_family(int N, double alpha, double r) {
  if (!(alpha > 0) || !(alpha < N - 1)) throw DomainError("singular_family: need 0 < alpha < N - 1");
  if (!(r > 0) || r > 1) throw DomainError("singular_family: r outside (0, 1]");
  return std::pow(r, -alpha) - 1;
}

ClosedForm ClosedForm::make_torsion(int N, double R, double p) {
  torsion(N, R, p, 0);
  return {ClosedFormKind::Torsion, N, R, p, 0, 0, 0};
}

ClosedForm ClosedForm::make_hardy_line(int N, double a, double lambda, double p) {
  hardy_line(N, a, lambda, p, 0);
  return {ClosedFormKind::HardyLine, N, 1, p, a, lambda, 0};
}

ClosedForm ClosedForm::make_extreme_pair(int N) {
  return {ClosedFormKind::ExtremePair, N, 1, 1, N - 1.0, 0, 0};
}

ClosedForm ClosedForm::make_singular_family(int N, double alpha) {
  singular_family(N, alpha, 1);
  return {ClosedFormKind::SingularFamily, N, 1, 1, 0, N - 1.0, alpha};
}

double ClosedForm::operator()(double r) const {
  switch (kind) {
    case ClosedFormKind::Torsion: return torsion(N, R, p, r);
    case ClosedFormKind::HardyLine: return hardy_line(N, a, lambda, p, r);
    case ClosedFormKind::ExtremePair: return 1 - r;
    case ClosedFormKind::SingularFamily: return singular_family(N, alpha, r);
  }
  return 0;
}

double ClosedForm::derivative(double r) const {
  switch (kind) {
    case ClosedFormKind::Torsion: return torsion_derivative(N, R, p, r);
    case ClosedFormKind::HardyLine: return -std::pow(a / (N - 1), 1 / (p - 1));
    case ClosedFormKind::ExtremePair: return -1;
    case ClosedFormKind::SingularFamily: return -alpha * std::pow(r, -alpha - 1);
  }
  return 0;
}

ProblemSpec ClosedForm::problem() const {
  ProblemSpec s;
  s.N = N;
  s.domain.kind = DomainKind::Ball;
  s.domain.R = R;
  switch (kind) {
    case ClosedFormKind::Torsion:
      s.f = SourceSpec::constant(1);
      break;
    case ClosedFormKind::HardyLine:
      s.lambda = lambda;
      s.hardy_term = HardyTerm::Source;
      s.f = SourceSpec::power(a - lambda, 1);
      break;
    case ClosedFormKind::ExtremePair:
      s.lambda = 0;
      s.hardy_term = HardyTerm::Source;
      s.f = SourceSpec::power(N - 1.0, 1);
      break;
    case ClosedFormKind::SingularFamily:
      s.lambda = N - 1.0;
      s.f = SourceSpec::constant(0);
      break;
  }
  return s;
}

RadialField ClosedForm::sample(const RadialGrid& g) const {
  return RadialField::sample(g, [&](double r) { return (*this)(r); });
}

double source_mass(const ProblemSpec& spec, double a, double b) {
  const double lam = spec.hardy_term == HardyTerm::Source ? spec.lambda : 0.0;
  const auto segs = with_inverse_r(spec.f, lam, a, b);
  return spec.N * unit_ball_volume(spec.N) * segments_moment(segs, a, b, spec.N - 1);
}

VectorXd midpoint_masses(const ProblemSpec& spec, const RadialGrid& g) {
  VectorXd m(g.M);
  double acc = 0, prev = g.nodes[0];
  for (int j = 0; j < g.M; ++j) {
    const double rho = g.midpoint(j);
    acc += source_mass(spec, prev, rho);
    m[j] = acc;
    prev = rho;
  }
  return m;
}

VectorXd dual_hardy_weights(const RadialGrid& g, double p) {
  const double sigma = g.N * unit_ball_volume(g.N);
  VectorXd w = VectorXd::Zero(g.M + 1);
  double lo = g.nodes[0];
  for (int i = 0; i < g.M; ++i) {
    const double hi = g.midpoint(i);
    w[i] = sigma * power_integral(lo, hi, g.N - 1 - p);
    lo = hi;
  }
  return w;
}

namespace {

double phi_inv(double q, double p) {
  if (q == 0) return 0;
  return (q > 0 ? 1.0 : -1.0) * std::pow(std::abs(q), 1 / (p - 1));
}

double phi_inv_prime(double q, double p, double eps) {
  const double e = (2 - p) / (p - 1);
  if (e >= 0) return std::pow(std::abs(q), e) / (p - 1);
  return std::pow(q * q + eps * eps, 0.5 * e) / (p - 1);
}

// Midpoint collocation of the radial equation: slope_j = phi^{-1}(q_src_j(u, c)).
struct Collocation {
  const ProblemSpec& spec;
  const RadialGrid& g;
  double p, lambda, sigma;
  bool potential, annulus;
  VectorXd Mf, w, rn;

  Collocation(const ProblemSpec& s, const RadialGrid& grid, double pp, double lam)
      : spec(s), g(grid), p(pp), lambda(lam) {
    sigma = g.N * unit_ball_volume(g.N);
    potential = s.hardy_term == HardyTerm::Potential && lam != 0;
    annulus = g.annulus();
    Mf = midpoint_masses(s, g);
    w = dual_hardy_weights(g, p);
    rn.resize(g.M);
    for (int j = 0; j < g.M; ++j) rn[j] = std::pow(g.midpoint(j), g.N - 1);
  }

  VectorXd qsrc(const VectorXd& u, double c) const {
    VectorXd q(g.M);
    double acc = 0;
    for (int j = 0; j < g.M; ++j) {
      if (potential) acc += lambda * w[j] * phi_p(u[j], p);
      q[j] = (c - (Mf[j] + acc) / sigma) / rn[j];
    }
    return q;
  }

  // Nodal profile integrated inward from u_M = 0.
  VectorXd integrate(const VectorXd& q) const {
    VectorXd u(g.M + 1);
    u[g.M] = 0;
    for (int j = g.M - 1; j >= 0; --j) u[j] = u[j + 1] - g.width(j) * phi_inv(q[j], p);
    return u;
  }

  // Integration constant making u_0 = 0 on annuli.
  double anchor(const VectorXd& u) const {
    auto t0 = [&](double c) { return integrate(qsrc(u, c))[0]; };
    double lo = -1, hi = 1;
    while (t0(lo) < 0) lo *= 2;
    while (t0(hi) > 0) hi *= 2;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (t0(mid) > 0) lo = mid; else hi = mid;
      if (hi - lo <= 1e-15 * std::max(1.0, std::abs(mid))) break;
    }
    return 0.5 * (lo + hi);
  }
};

double sup_residual(const RadialField& u, double p, const ProblemSpec& spec) {
  return strong_residual(u, p, spec).cwiseAbs().maxCoeff();
}

bool newton(const Collocation& col, VectorXd& u, double& c, double p, const BvpSettings& st,
            const ProblemSpec& spec, BvpResult& res) {
  const auto& g = col.g;
  const int M = g.M;
  const int off = col.annulus ? 1 : 0;
  auto residual_vec = [&](const VectorXd& uu, double cc) {
    VectorXd T = col.integrate(col.qsrc(uu, cc));
    VectorXd H(M);
    for (int i = off; i < M; ++i) H[i - off] = uu[i] - T[i];
    if (col.annulus) H[M - 1] = T[0];
    return H;
  };
  for (int it = 0; it < st.max_iters; ++it) {
    const double e = sup_residual(RadialField(g, u), p, spec);
    res.residual_history.push_back(e);
    res.residual = e;
    if (e < st.tol) return true;
    ++res.iterations;

    const VectorXd q = col.qsrc(u, c);
    VectorXd gp(M), C(M + 1);
    for (int j = 0; j < M; ++j) gp[j] = phi_inv_prime(q[j], p, st.eps);
    C[M] = 0;
    for (int j = M - 1; j >= 0; --j) C[j] = C[j + 1] + g.width(j) * gp[j] / col.rn[j];
    const double eps_u = st.eps * std::max(1.0, u.cwiseAbs().maxCoeff());
    VectorXd dk = VectorXd::Zero(M + 1);
    if (col.potential)
      for (int k = 0; k < M; ++k)
        dk[k] = col.lambda * col.w[k] * (p - 1) * std::pow(u[k] * u[k] + eps_u * eps_u, 0.5 * (p - 2)) / col.sigma;

    MatrixXd J = MatrixXd::Zero(M, M);
    for (int i = off; i < M; ++i) {
      for (int k = off; k < M; ++k) J(i - off, k - off) = (i == k ? 1.0 : 0.0) - dk[k] * C[std::max(i, k)];
      if (col.annulus) J(i - off, M - 1) = C[i];
    }
    if (col.annulus) {
      for (int k = 1; k < M; ++k) J(M - 1, k - 1) = dk[k] * C[k];
      J(M - 1, M - 1) = -C[0];
    }
    const VectorXd H = residual_vec(u, c);
    const VectorXd dx = J.partialPivLu().solve(H);
    if (!dx.allFinite()) return false;
    const double h0 = H.cwiseAbs().maxCoeff();
    double alpha = 1;
    VectorXd un = u;
    double cn = c;
    for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
      un = u;
      for (int i = off; i < M; ++i) un[i] -= alpha * dx[i - off];
      cn = col.annulus ? c - alpha * dx[M - 1] : 0.0;
      if (residual_vec(un, cn).cwiseAbs().maxCoeff() < h0) break;
    }
    u = un;
    c = cn;
    if (!u.allFinite()) return false;
  }
  const double e = sup_residual(RadialField(g, u), p, spec);
  res.residual_history.push_back(e);
  res.residual = e;
  return e < st.tol;
}

}  // namespace

VectorXd strong_residual(const RadialField& u, double p, const ProblemSpec& spec) {
  if (!(p > 1)) throw DomainError("strong_residual: p must exceed 1");
  const auto& g = u.grid;
  Collocation col(spec, g, p, spec.lambda);
  const VectorXd slope = gradient_radial(u);
  VectorXd q(g.M);
  for (int j = 0; j < g.M; ++j) q[j] = phi_p(slope[j], p);
  double c = 0;
  if (col.annulus) {
    double first = col.potential ? spec.lambda * col.w[0] * phi_p(u.values[0], p) : 0.0;
    c = col.rn[0] * q[0] + (col.Mf[0] + first) / col.sigma;
  }
  return q - col.qsrc(u.values, c);
}

BvpResult solve_radial_bvp(const ProblemSpec& spec, double p, const RadialGrid& grid,
                           const BvpSettings& st) {
  spec.validate();
  if (!(p > 1) || !(p < spec.N)) throw DomainError("solve_radial_bvp: need 1 < p < N");
  BvpResult res;
  res.coercivity_warning = !spec.coercive(p);

  auto attempt = [&](double lam, VectorXd& u, double& c, bool warm) {
    Collocation col(spec, grid, p, lam);
    if (!warm) {
      u = VectorXd::Zero(grid.M + 1);
      Collocation base(spec, grid, p, 0.0);
      c = grid.annulus() ? base.anchor(u) : 0.0;
      u = base.integrate(base.qsrc(u, c));
    }
    if (col.annulus && !col.potential) c = col.anchor(u);
    ProblemSpec sp = spec;
    sp.lambda = lam;
    return newton(col, u, c, p, st, sp, res);
  };

  VectorXd u;
  double c = 0;
  bool ok = attempt(spec.lambda, u, c, false);
  if (!ok && spec.hardy_term == HardyTerm::Potential && spec.lambda > 0) {
    res.residual_history.push_back(-1);  // marks the restart
    ok = attempt(0.0, u, c, false);
    for (int k = 1; ok && k <= st.lambda_steps; ++k) ok = attempt(spec.lambda * k / st.lambda_steps, u, c, true);
  }
  if (!ok)
    throw SolverError("solve_radial_bvp: Newton did not converge (residual " + std::to_string(res.residual) +
                          (res.coercivity_warning ? ", lambda violates the Hardy coercivity bound)" : ")"),
                      res.residual_history);
  res.field = RadialField(grid, u);
  res.converged = true;
  return res;
}

BvpResult solve_radial_bvp(const ProblemSpec& spec, double p, const BvpSettings& settings) {
  return solve_radial_bvp(spec, p, spec.radial_grid(), settings);
}

}  // namespace hlap

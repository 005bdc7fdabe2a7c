#include "hlap/minimizer.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>

namespace hlap {

namespace {

constexpr int kSub = 4;  // subsamples per side of a dual cell

struct PlanarSystem {
  Grid2D g;
  VectorXd load, omega;
  double p, beta, area;
  std::vector<int> free;  // masked node ids
  std::vector<int> slot;  // node id -> position in free, or -1

  PlanarSystem(const ProblemSpec& spec, const Grid2D& grid, double pp, double bb, double n)
      : g(grid), p(pp), beta(bb) {
    area = 0.5 * g.h * g.h;
    const double lam = spec.hardy_term == HardyTerm::Source ? spec.lambda : 0.0;
    load = VectorXd::Zero(g.node_count());
    omega = VectorXd::Zero(g.node_count());
    slot.assign(g.node_count(), -1);
    const double d = g.h / kSub;
    for (int j = 0; j <= g.n; ++j)
      for (int i = 0; i <= g.n; ++i) {
        const int k = g.index(i, j);
        if (!g.mask[k]) continue;
        slot[k] = int(free.size());
        free.push_back(k);
        double fl = 0, wl = 0;
        for (int b = 0; b < kSub; ++b)
          for (int a = 0; a < kSub; ++a) {
            const double x = g.x(i) - 0.5 * g.h + (a + 0.5) * d;
            const double y = g.x(j) - 0.5 * g.h + (b + 0.5) * d;
            const double r = std::hypot(x, y);
            fl += spec.f(r) + (lam != 0 ? lam / r : 0.0);
            if (beta != 0) wl += truncated_weight(r, p, n);
          }
        load[k] = fl * d * d;
        omega[k] = wl * d * d;
      }
  }

  MatrixXd grads(const VectorXd& u) const { return gradient_2d(GridField2D(g, u)); }

  double energy(const VectorXd& u) const {
    const MatrixXd G = grads(u);
    double e = area * G.colwise().norm().array().pow(p).sum() / p;
    if (beta != 0) e -= beta * (omega.array() * u.array().abs().pow(p)).sum() / p;
    return e - load.dot(u);
  }

  VectorXd hardy_part(const VectorXd& u) const {
    VectorXd h = VectorXd::Zero(u.size());
    if (beta != 0)
      for (int k : free) h[k] = omega[k] * phi_p(u[k], p);
    return h;
  }

  VectorXd gradient(const VectorXd& u) const {
    const MatrixXd G = grads(u);
    VectorXd gr = VectorXd::Zero(u.size());
    for (int t = 0; t < g.triangle_count(); ++t) {
      int v0, vx, vy;
      triangle_vertices(g, t, v0, vx, vy);
      const double m = G.col(t).norm();
      if (m == 0) continue;
      const double s = (t % 2 == 0) ? 1.0 : -1.0;
      const double c = area * std::pow(m, p - 2) * s / g.h;
      gr[vx] += c * G(0, t);
      gr[v0] -= c * G(0, t);
      gr[vy] += c * G(1, t);
      gr[v0] -= c * G(1, t);
    }
    gr -= load;
    if (beta != 0) gr -= beta * hardy_part(u);
    for (int k = 0; k < g.node_count(); ++k)
      if (!g.mask[k]) gr[k] = 0;
    return gr;
  }

  // Smoothed Hessian of the convex part (restricted to free nodes); SPD for p > 1.
  Eigen::SparseMatrix<double> metric(const VectorXd& u, double delta) const {
    const MatrixXd G = grads(u);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(9 * g.triangle_count());
    for (int t = 0; t < g.triangle_count(); ++t) {
      int v[3];
      triangle_vertices(g, t, v[0], v[1], v[2]);
      const double s = (t % 2 == 0) ? 1.0 : -1.0;
      const Eigen::Vector2d Gt = G.col(t);
      const double q = Gt.squaredNorm() + delta * delta;
      const Eigen::Matrix2d A =
          std::pow(q, 0.5 * (p - 2)) * (Eigen::Matrix2d::Identity() + (p - 2) * Gt * Gt.transpose() / q);
      // dG/du for the three vertices (rows: x, y)
      Eigen::Matrix<double, 2, 3> B;
      B << -1, 1, 0, -1, 0, 1;
      B *= s / g.h;
      const Eigen::Matrix3d K = area * B.transpose() * A * B;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const int ia = slot[v[a]], ib = slot[v[b]];
          if (ia >= 0 && ib >= 0) trip.emplace_back(ia, ib, K(a, b));
        }
    }
    Eigen::SparseMatrix<double> H(int(free.size()), int(free.size()));
    H.setFromTriplets(trip.begin(), trip.end());
    return H;
  }

  VectorXd gather(const VectorXd& full) const {
    VectorXd r(free.size());
    for (std::size_t i = 0; i < free.size(); ++i) r[i] = full[free[i]];
    return r;
  }
  VectorXd scatter(const VectorXd& part) const {
    VectorXd r = VectorXd::Zero(g.node_count());
    for (std::size_t i = 0; i < free.size(); ++i) r[free[i]] = part[i];
    return r;
  }

  double relative_gradient(const VectorXd& u) const {
    const double scale = load.norm() + beta * hardy_part(u).norm();
    const double gn = gradient(u).norm();
    return scale > 0 ? gn / scale : gn;
  }
};

}  // namespace

double energy_J(const GridField2D& u, double p, double beta, double n, const ProblemSpec& spec) {
  if (!(beta >= 0)) throw DomainError("energy_J: beta must be nonnegative");
  if (!(p > 1) || !(p < 2)) throw DomainError("energy_J: need 1 < p < N");
  return PlanarSystem(spec, u.grid, p, beta, n).energy(u.values);
}

VectorXd energy_gradient(const GridField2D& u, double p, double beta, double n, const ProblemSpec& spec) {
  if (!(beta >= 0)) throw DomainError("energy_gradient: beta must be nonnegative");
  if (!(p > 1) || !(p < 2)) throw DomainError("energy_gradient: need 1 < p < N");
  return PlanarSystem(spec, u.grid, p, beta, n).gradient(u.values);
}

SolveResult minimize_2d(const ProblemSpec& spec, double p, double n, const MinimizeSettings& st,
                        const SolveResult* initial) {
  const Grid2D grid = (initial && initial->planar) ? initial->field2d.grid : spec.grid_2d(st.n2d);
  const double beta = hardy_beta(spec);
  PlanarSystem sys(spec, grid, p, beta, n);
  const double limit = 10 * apriori_bound(spec, p).rhs;
  const double area = sys.area;

  SolveResult res;
  res.planar = true;
  VectorXd u = (initial && initial->planar) ? initial->field2d.values : VectorXd::Zero(grid.node_count());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;

  if (u.isZero() && sys.load.norm() > 0) {
    // ray-optimal multiple of the p = 2 (Laplacian) response to the load
    solver.compute(sys.metric(VectorXd::Zero(grid.node_count()), 1.0));
    const VectorXd d = sys.scatter(solver.solve(sys.gather(sys.load)));
    const double P = area * sys.grads(d).colwise().norm().array().pow(p).sum() -
                     beta * (sys.omega.array() * d.array().abs().pow(p)).sum();
    const double ld = sys.load.dot(d);
    if (P > 0 && ld > 0) u = std::pow(ld / P, 1 / (p - 1)) * d;
  }

  double e = sys.energy(u);
  res.energy_trace.push_back(e);
  double rel = sys.relative_gradient(u);
  int it = 0;
  // stop when 50 iterations fail to improve the best gradient by 1%: the
  // iterate has reached the resolution of nodal differences
  double best = rel;
  int since_best = 0;
  while (rel > st.grad_tol && it < st.max_iters && since_best < 50) {
    const VectorXd gr = sys.gradient(u);
    const double gmax = sys.grads(u).colwise().norm().maxCoeff();
    solver.compute(sys.metric(u, 1e-12 * std::max(gmax, 1e-300)));
    if (solver.info() != Eigen::Success) break;
    const VectorXd d = -sys.scatter(solver.solve(sys.gather(gr)));
    const double slope = gr.dot(d);
    if (!(slope < 0)) break;
    double alpha = 1;
    VectorXd trial;
    double et = e;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, alpha *= st.backtrack) {
      trial = u + alpha * d;
      et = sys.energy(trial);
      if (et <= e + st.armijo_c * alpha * slope) {
        accepted = true;
        break;
      }
      // once energy differences drop to roundoff, accept steps that shrink the gradient
      if (std::abs(et - e) <= 1e-13 * std::abs(e) && sys.relative_gradient(trial) < 0.5 * rel) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    ++it;
    u = trial;
    e = et;
    res.energy_trace.push_back(e);
    rel = sys.relative_gradient(u);
    if (rel < 0.99 * best) {
      best = rel;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (p_energy(GridField2D(grid, u), p) > limit) throw CoercivityLost("iterate exceeds ten times the a priori bound");
  }
  res.field2d = GridField2D(grid, u);
  res.energy = e;
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

}  // namespace hlap

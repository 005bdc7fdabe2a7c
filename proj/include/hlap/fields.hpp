#pragma once

#include "hlap/norms.hpp"
#include "hlap/quadrature.hpp"
#include "hlap/types.hpp"

#include <algorithm>
#include <concepts>
#include <cmath>
#include <vector>

namespace hlap {

// Graded radial grid, nodes r_i = r_inner + (R - r_inner) (i/M)^grading.
template <class T = double>
struct BasicRadialGrid {
  int N = 2;
  T R = 1;
  int M = 512;
  T grading = 2;
  T r_inner = 0;
  VectorX<T> nodes;

  T width(int j) const { return nodes[j + 1] - nodes[j]; }
  T midpoint(int j) const { return T(0.5) * (nodes[j] + nodes[j + 1]); }
  // Exact Lebesgue measure of the shell {r_j < |x| < r_{j+1}}.
  T cell_measure(int j) const {
    using std::pow;
    return T(unit_ball_volume(N)) * (pow(nodes[j + 1], T(N)) - pow(nodes[j], T(N)));
  }
  T total_measure() const {
    using std::pow;
    return T(unit_ball_volume(N)) * (pow(R, T(N)) - pow(r_inner, T(N)));
  }
  bool annulus() const { return r_inner > T(0); }
};

using RadialGrid = BasicRadialGrid<double>;

template <class T = double>
BasicRadialGrid<T> make_radial_grid(int N, T R, int M, T grading = T(2), T r_inner = T(0)) {
  if (M < 8) throw DomainError("make_radial_grid: M must be >= 8");
  if (N < 2) throw DomainError("make_radial_grid: N must be >= 2");
  if (!(R > r_inner) || r_inner < T(0)) throw DomainError("make_radial_grid: need 0 <= r_inner < R");
  if (!(grading >= T(1))) throw DomainError("make_radial_grid: grading must be >= 1");
  BasicRadialGrid<T> g;
  g.N = N;
  g.R = R;
  g.M = M;
  g.grading = grading;
  g.r_inner = r_inner;
  g.nodes.resize(M + 1);
  using std::pow;
  for (int i = 0; i <= M; ++i) g.nodes[i] = r_inner + (R - r_inner) * pow(T(i) / T(M), grading);
  g.nodes[M] = R;
  return g;
}

template <class T>
VectorX<T> cell_measures(const BasicRadialGrid<T>& g) {
  VectorX<T> v(g.M);
  for (int j = 0; j < g.M; ++j) v[j] = g.cell_measure(j);
  return v;
}

template <class T>
VectorX<T> midpoints(const BasicRadialGrid<T>& g) {
  return T(0.5) * (g.nodes.head(g.M) + g.nodes.tail(g.M));
}

// Nodal values of a piecewise-linear radial profile.
template <class T = double>
struct BasicRadialField {
  BasicRadialGrid<T> grid;
  VectorX<T> values;

  BasicRadialField() = default;
  BasicRadialField(BasicRadialGrid<T> g, VectorX<T> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.M + 1) throw DomainError("RadialField: length does not match grid");
  }
  static BasicRadialField zero(const BasicRadialGrid<T>& g) {
    return BasicRadialField(g, VectorX<T>::Zero(g.M + 1));
  }
  template <class F>
  static BasicRadialField sample(const BasicRadialGrid<T>& g, F&& fn) {
    VectorX<T> v(g.M + 1);
    for (int i = 0; i <= g.M; ++i) v[i] = fn(g.nodes[i]);
    return BasicRadialField(g, std::move(v));
  }

  T operator()(T r) const {
    const auto& x = grid.nodes;
    if (r <= x[0]) return values[0];
    if (r >= x[grid.M]) return values[grid.M];
    const auto it = std::upper_bound(x.data(), x.data() + x.size(), r);
    const int j = int(it - x.data()) - 1;
    const T s = (r - x[j]) / (x[j + 1] - x[j]);
    return (T(1) - s) * values[j] + s * values[j + 1];
  }
  VectorX<T> midpoint_values() const {
    return T(0.5) * (values.head(grid.M) + values.tail(grid.M));
  }
};

using RadialField = BasicRadialField<double>;

// Cellwise radial component of a vector field.
template <class T = double>
struct BasicRadialVectorField {
  BasicRadialGrid<T> grid;
  VectorX<T> radial;

  T operator()(T r) const {
    const auto& x = grid.nodes;
    auto it = std::upper_bound(x.data(), x.data() + x.size(), r);
    int j = std::clamp(int(it - x.data()) - 1, 0, grid.M - 1);
    return radial[j];
  }
  T sup_norm() const { return radial.size() ? radial.cwiseAbs().maxCoeff() : T(0); }
};

using RadialVectorField = BasicRadialVectorField<double>;

// Sum over cells of g_j |cell_j|, g sampled at cell midpoints.
template <class T, class Derived>
T weighted_integral(const Eigen::MatrixBase<Derived>& g, const BasicRadialGrid<T>& grid) {
  if (g.size() != grid.M) throw DomainError("weighted_integral: expected one value per cell");
  if (!g.allFinite()) throw DomainError("weighted_integral: non-finite integrand");
  return g.dot(cell_measures(grid));
}

// Callable integrand: Gauss rule per cell against the exact weight r^{N-1}.
template <class T, class F>
  requires(std::invocable<F, T> && !std::is_base_of_v<Eigen::EigenBase<std::decay_t<F>>, std::decay_t<F>>)
T weighted_integral(F&& fn, const BasicRadialGrid<T>& grid) {
  using std::pow;
  const auto& rule = gauss8();
  T s = 0;
  for (int j = 0; j < grid.M; ++j)
    s += rule.integrate([&](double r) { return T(fn(T(r))) * pow(T(r), T(grid.N - 1)); }, double(grid.nodes[j]),
                        double(grid.nodes[j + 1]));
  s *= T(grid.N * unit_ball_volume(grid.N));
  if (!std::isfinite(double(s))) throw DomainError("weighted_integral: non-finite integrand");
  return s;
}

template <class T>
VectorX<T> gradient_radial(const BasicRadialField<T>& u) {
  const auto& x = u.grid.nodes;
  const int M = u.grid.M;
  return (u.values.tail(M) - u.values.head(M)).cwiseQuotient(x.tail(M) - x.head(M));
}

template <class T>
T p_energy(const BasicRadialField<T>& u, T p) {
  if (!(p >= T(1)) || !(p < T(u.grid.N))) throw DomainError("p_energy: need 1 <= p < N");
  return weighted_integral(gradient_radial(u).array().abs().pow(p).matrix().eval(), u.grid);
}

template <class T>
T total_variation(const BasicRadialField<T>& u) {
  return weighted_integral(gradient_radial(u).cwiseAbs().eval(), u.grid);
}

template <class T>
BasicRadialField<T> truncate(const BasicRadialField<T>& u, T k) {
  if (!(k > T(0))) throw DomainError("truncate: k must be positive");
  return BasicRadialField<T>(u.grid, u.values.cwiseMax(-k).cwiseMin(k));
}

// |t|^{p-2} t, continued by 0 at t = 0.
template <class T>
T phi_p(T t, T p) {
  using std::abs;
  using std::pow;
  if (t == T(0)) return T(0);
  return (t > T(0) ? T(1) : T(-1)) * pow(abs(t), p - T(1));
}

template <class T>
BasicRadialVectorField<T> flux(const BasicRadialField<T>& u, T p) {
  if (!(p > T(1))) throw DomainError("flux: p must exceed 1");
  VectorX<T> g = gradient_radial(u);
  for (Eigen::Index j = 0; j < g.size(); ++j) g[j] = phi_p(g[j], p);
  return {u.grid, g};
}

// Midpoint values on exact cell measures, e.g. for rearrangement norms.
template <class T>
SampledFunction<T> sampled(const BasicRadialField<T>& u) {
  return SampledFunction<T>(u.midpoint_values(), cell_measures(u.grid));
}

// int_Omega |u|^q |x|^{-s} dx for the piecewise-linear interpolant; cells are
// split at sign changes and, for a singular weight, the first cell at the
// origin is mapped by r = h t^kappa so the power is absorbed into the rule.
template <class T>
T interpolant_integral(const BasicRadialField<T>& u, T q, T s = T(0)) {
  using std::abs;
  using std::pow;
  const auto& g = u.grid;
  const auto& rule = gauss8();
  const T sigma = T(g.N * unit_ball_volume(g.N));
  const T e = T(g.N - 1) - s;
  T total = 0;
  for (int j = 0; j < g.M; ++j) {
    const T a = g.nodes[j], b = g.nodes[j + 1];
    const T ua = u.values[j], ub = u.values[j + 1];
    auto lin = [&](T r) { return ua + (ub - ua) * (r - a) / (b - a); };
    std::vector<T> cuts{a};
    if (ua * ub < T(0)) cuts.push_back(a + (b - a) * ua / (ua - ub));
    cuts.push_back(b);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const T lo = cuts[c], hi = cuts[c + 1];
      if (lo == T(0) && e < T(0)) {
        const T kappa = T(1) / (e + T(1));
        total += rule.integrate(
            [&](double t01) {
              const T t = T(0.5) * (T(t01) + T(1));
              return T(0.5) * pow(abs(lin(hi * pow(t, kappa))), q);
            },
            -1.0, 1.0) * pow(hi, e + T(1)) * kappa;
      } else {
        total += rule.integrate([&](double r) { return pow(abs(lin(T(r))), q) * pow(T(r), e); },
                                double(lo), double(hi));
      }
    }
  }
  return sigma * total;
}

template <class T>
T lp_norm(const BasicRadialField<T>& u, T q) {
  using std::pow;
  return pow(interpolant_integral(u, q), T(1) / q);
}

// Closed interval [lo, hi]; Sgn(s) is {1}, [-1, 1] or {-1}.
struct Interval {
  double lo = 0, hi = 0;
  bool contains(double x, double tol = 0) const { return x >= lo - tol && x <= hi + tol; }
};

inline Interval sgn_set(double s) {
  if (s > 0) return {1, 1};
  if (s < 0) return {-1, -1};
  return {-1, 1};
}

// ---------------------------------------------------------------------------
// Masked Cartesian grids on [-L, L]^2. Node (i, j) sits at (-L + i h, -L + j h);
// with an even cell count the origin is a node. Each square is split into the
// lower triangle (i,j),(i+1,j),(i,j+1) and the upper triangle
// (i+1,j+1),(i,j+1),(i+1,j), each of area h^2/2, carrying a P1 gradient.

enum class Shape2D { Disk, Box };

template <class T = double>
struct BasicGrid2D {
  Shape2D shape = Shape2D::Disk;
  T L = 1;
  T R = 1;  // disk radius; equals L for boxes
  int n = 256;
  T h = T(2) / T(256);
  std::vector<char> mask;

  int side() const { return n + 1; }
  int index(int i, int j) const { return j * (n + 1) + i; }
  int node_count() const { return (n + 1) * (n + 1); }
  int triangle_count() const { return 2 * n * n; }
  T x(int i) const { return -L + T(i) * h; }
  T total_measure() const { return shape == Shape2D::Box ? T(4) * L * L : T(M_PI) * R * R; }
};

using Grid2D = BasicGrid2D<double>;

template <class T = double>
BasicGrid2D<T> make_disk_grid(T R, int n = 256) {
  if (n < 8 || n % 2) throw DomainError("make_disk_grid: need an even cell count >= 8");
  BasicGrid2D<T> g;
  g.shape = Shape2D::Disk;
  g.L = R;
  g.R = R;
  g.n = n;
  g.h = T(2) * R / T(n);
  g.mask.assign(g.node_count(), 0);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const T x = g.x(i), y = g.x(j);
      g.mask[g.index(i, j)] = (x * x + y * y < R * R * (T(1) - T(1e-12)));
    }
  return g;
}

template <class T = double>
BasicGrid2D<T> make_box_grid(T L, int n = 256) {
  if (n < 8 || n % 2) throw DomainError("make_box_grid: need an even cell count >= 8");
  BasicGrid2D<T> g;
  g.shape = Shape2D::Box;
  g.L = L;
  g.R = L;
  g.n = n;
  g.h = T(2) * L / T(n);
  g.mask.assign(g.node_count(), 0);
  for (int j = 1; j < n; ++j)
    for (int i = 1; i < n; ++i) g.mask[g.index(i, j)] = 1;
  return g;
}

// Nodal values, zero off the mask.
template <class T = double>
struct BasicGridField2D {
  BasicGrid2D<T> grid;
  VectorX<T> values;

  BasicGridField2D() = default;
  BasicGridField2D(BasicGrid2D<T> g, VectorX<T> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.node_count()) throw DomainError("GridField2D: length does not match grid");
    for (int k = 0; k < grid.node_count(); ++k)
      if (!grid.mask[k]) values[k] = T(0);
  }
  static BasicGridField2D zero(const BasicGrid2D<T>& g) {
    return BasicGridField2D(g, VectorX<T>::Zero(g.node_count()));
  }
  template <class F>
  static BasicGridField2D sample(const BasicGrid2D<T>& g, F&& fn) {
    VectorX<T> v(g.node_count());
    for (int j = 0; j <= g.n; ++j)
      for (int i = 0; i <= g.n; ++i) v[g.index(i, j)] = fn(g.x(i), g.x(j));
    return BasicGridField2D(g, std::move(v));
  }
  T center() const { return values[grid.index(grid.n / 2, grid.n / 2)]; }
};

using GridField2D = BasicGridField2D<double>;

// Triangle vertex triples in a fixed order: lower triangles first per square.
// The first vertex is the corner at which both one-sided differences start.
template <class T>
void triangle_vertices(const BasicGrid2D<T>& g, int t, int& v0, int& vx, int& vy) {
  const int sq = t / 2, i = sq % g.n, j = sq / g.n;
  if (t % 2 == 0) {
    v0 = g.index(i, j);
    vx = g.index(i + 1, j);
    vy = g.index(i, j + 1);
  } else {
    // upper triangle: gradient ((u11 - u01)/h, (u11 - u10)/h), sign handled below
    v0 = g.index(i + 1, j + 1);
    vx = g.index(i, j + 1);
    vy = g.index(i + 1, j);
  }
}

// Per-triangle gradients as a 2 x (2 n^2) matrix.
template <class T>
MatrixX<T> gradient_2d(const BasicGridField2D<T>& u) {
  const auto& g = u.grid;
  MatrixX<T> G(2, g.triangle_count());
  for (int t = 0; t < g.triangle_count(); ++t) {
    int v0, vx, vy;
    triangle_vertices(g, t, v0, vx, vy);
    const T s = (t % 2 == 0) ? T(1) : T(-1);
    G(0, t) = s * (u.values[vx] - u.values[v0]) / g.h;
    G(1, t) = s * (u.values[vy] - u.values[v0]) / g.h;
  }
  return G;
}

template <class T>
T p_energy(const BasicGridField2D<T>& u, T p) {
  if (!(p >= T(1)) || !(p < T(2))) throw DomainError("p_energy: need 1 <= p < N");
  const T area = T(0.5) * u.grid.h * u.grid.h;
  return area * gradient_2d(u).colwise().norm().array().pow(p).sum();
}

template <class T>
T total_variation(const BasicGridField2D<T>& u) {
  const T area = T(0.5) * u.grid.h * u.grid.h;
  return area * gradient_2d(u).colwise().norm().sum();
}

template <class T>
BasicGridField2D<T> truncate(const BasicGridField2D<T>& u, T k) {
  if (!(k > T(0))) throw DomainError("truncate: k must be positive");
  return BasicGridField2D<T>(u.grid, u.values.cwiseMax(-k).cwiseMin(k));
}

// Per-triangle vector field.
template <class T = double>
struct BasicTriangleField {
  BasicGrid2D<T> grid;
  MatrixX<T> components;  // 2 x triangles
  T sup_norm() const { return components.size() ? components.colwise().norm().maxCoeff() : T(0); }
};

using TriangleField = BasicTriangleField<double>;

template <class T>
BasicTriangleField<T> flux(const BasicGridField2D<T>& u, T p) {
  if (!(p > T(1))) throw DomainError("flux: p must exceed 1");
  MatrixX<T> G = gradient_2d(u);
  using std::pow;
  for (Eigen::Index t = 0; t < G.cols(); ++t) {
    const T m = G.col(t).norm();
    G.col(t) *= (m > T(0)) ? pow(m, p - T(2)) : T(0);
  }
  return {u.grid, G};
}

// Triangle-centroid values on area h^2/2.
template <class T>
SampledFunction<T> sampled(const BasicGridField2D<T>& u) {
  const auto& g = u.grid;
  VectorX<T> v(g.triangle_count());
  for (int t = 0; t < g.triangle_count(); ++t) {
    int v0, vx, vy;
    triangle_vertices(g, t, v0, vx, vy);
    v[t] = (u.values[v0] + u.values[vx] + u.values[vy]) / T(3);
  }
  return SampledFunction<T>(v, VectorX<T>::Constant(g.triangle_count(), T(0.5) * g.h * g.h));
}

}  // namespace hlap

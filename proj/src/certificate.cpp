#include "hlap/certificate.hpp"
#include "hlap/norms.hpp"
#include "hlap/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hlap {

namespace {

const GaussRule& rule_r() {
  static const GaussRule r(16);
  return r;
}
const GaussRule& rule_theta() {
  static const GaussRule r(24);
  return r;
}

double sphere_factor(int N) {
  // |S^{N-2}|, the measure of the sphere of directions orthogonal to the bump axis
  return 2 * std::pow(M_PI, 0.5 * (N - 1)) / std::tgamma(0.5 * (N - 1));
}

struct Tol {
  double sup, eq, pairing, trace, sign_u;
};

Tol tolerances(const Certificate& c) {
  if (c.numeric) return {0.02, 0.05, 0.05, 0.05, 1e-6};
  return {1e-9, 1e-3, 1e-6, 1e-6, 1e-9};
}

std::vector<double> sample_radii(const Certificate& c) {
  std::vector<double> r;
  const int n = 4000;
  for (int i = 0; i < n; ++i) r.push_back(c.R * (i + 0.5) / n);
  for (double b : c.breakpoints)
    for (double e : {-1e-9, 1e-9})
      if (b + e > 0 && b + e < c.R) r.push_back(b + e);
  return r;
}

std::vector<double> level_radii(const Profile& u, double k, double lo, double hi) {
  std::vector<double> out;
  if (std::isinf(k)) return out;
  const int n = 2000;
  auto g = [&](double r) { return std::abs(u(r)) - k; };
  double a = lo + (hi - lo) * 1e-9, ga = g(a);
  for (int i = 1; i <= n; ++i) {
    const double b = lo + (hi - lo) * i / n, gb = g(b);
    if ((ga < 0) != (gb < 0)) {
      double x = a, y = b;
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (x + y);
        if ((g(m) < 0) == (ga < 0)) x = m; else y = m;
      }
      out.push_back(0.5 * (x + y));
    }
    a = b;
    ga = gb;
  }
  return out;
}

// Integrates g(r, cos theta, w, d) r^{N-1} sin^{N-2} theta over the support of
// the bump, with w = 1 - d^2/rho^2 and d = |x - c|. g returns K components.
template <std::size_t K, class G>
std::array<double, K> bump_integral(int N, const Bump& b, std::vector<double> cuts, G&& g) {
  const double c0 = b.center, rho = b.rho;
  const double lo = std::max(0.0, c0 - rho), hi = c0 + rho;
  cuts.push_back(std::abs(c0 - rho));
  std::vector<double> knots{lo, hi};
  for (double x : cuts)
    if (x > lo && x < hi) knots.push_back(x);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::array<double, K> acc{};
  const auto& rr = rule_r();
  const auto& rt = rule_theta();
  const int sub = knots.size() > 40 ? 1 : 6;
  for (std::size_t s = 0; s + 1 < knots.size(); ++s)
    for (int piece = 0; piece < sub; ++piece) {
      const double a = knots[s] + (knots[s + 1] - knots[s]) * piece / sub;
      const double e = knots[s] + (knots[s + 1] - knots[s]) * (piece + 1) / sub;
      const double cr = 0.5 * (a + e), hr = 0.5 * (e - a);
      for (std::size_t i = 0; i < rr.x.size(); ++i) {
        const double r = cr + hr * rr.x[i];
        if (r <= 0) continue;
        const double kappa = c0 > 0 ? (r * r + c0 * c0 - rho * rho) / (2 * r * c0) : -2.0;
        if (kappa >= 1) continue;
        const double tmax = kappa <= -1 ? M_PI : std::acos(kappa);
        const double ct = 0.5 * tmax;
        std::array<double, K> inner{};
        for (std::size_t j = 0; j < rt.x.size(); ++j) {
          const double th = ct + ct * rt.x[j];
          const double cs = std::cos(th);
          const double d2 = std::max(0.0, r * r + c0 * c0 - 2 * r * c0 * cs);
          const double w = 1 - d2 / (rho * rho);
          if (w <= 0) continue;
          const auto v = g(r, cs, w, std::sqrt(d2));
          const double jac = rt.w[j] * ct * (N > 2 ? std::pow(std::sin(th), N - 2) : 1.0);
          for (std::size_t k = 0; k < K; ++k) inner[k] += jac * v[k];
        }
        const double wr = rr.w[i] * hr * std::pow(r, N - 1);
        for (std::size_t k = 0; k < K; ++k) acc[k] += wr * inner[k];
      }
    }
  const double sf = sphere_factor(N);
  for (auto& v : acc) v *= sf;
  return acc;
}

std::vector<double> source_breaks(const SourceSpec& f) {
  if (f.kind == SourceSpec::Kind::Steps || f.kind == SourceSpec::Kind::Tabulated) return f.edges;
  return {};
}

// Radial integral sigma_N int_0^R h(r) r^{N-1} dr over pieces split at cuts.
template <class H>
double radial_integral(int N, double R, std::vector<double> cuts, H&& h) {
  std::vector<double> knots{0.0, R};
  for (double x : cuts)
    if (x > 0 && x < R) knots.push_back(x);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  const auto& rr = rule_r();
  const int sub = knots.size() > 40 ? 1 : 64;
  double s = 0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k)
    for (int piece = 0; piece < sub; ++piece) {
      const double a = knots[k] + (knots[k + 1] - knots[k]) * piece / sub;
      const double b = knots[k] + (knots[k + 1] - knots[k]) * (piece + 1) / sub;
      s += rr.integrate([&](double r) { return h(r) * std::pow(r, N - 1); }, a, b);
    }
  return N * unit_ball_volume(N) * s;
}

}  // namespace

TestFunctionFamily TestFunctionFamily::standard(double R) {
  TestFunctionFamily f;
  for (double rho : {R / 12, R / 8, R / 6, R / 4, 0.3 * R}) f.bumps.push_back({R / 3, rho});
  for (double rho : {R / 12, R / 8, R / 6, R / 5, R / 4}) f.bumps.push_back({2 * R / 3, rho});
  f.bumps.push_back({R / 5, R / 6});   // near the origin, support excludes it
  f.bumps.push_back({R / 10, R / 4});  // support contains the origin
  return f;
}

CheckResult check_sup(const Certificate& c) {
  const Tol t = tolerances(c);
  double m = 0;
  for (double r : sample_radii(c)) m = std::max(m, std::abs(c.z(r)));
  return {m <= 1 + t.sup, m, "max |z|"};
}

CheckResult check_distributional(const Certificate& c, const TestFunctionFamily& family) {
  const Tol t = tolerances(c);
  CheckResult res;
  res.detail = "max normalized defect";
  // s in Sgn(u)
  for (double r : sample_radii(c)) {
    const double uv = c.u(r);
    const Interval iv = sgn_set(std::abs(uv) <= t.sign_u ? 0.0 : uv);
    if (!iv.contains(c.s(r), 1e-12)) {
      res.pass = false;
      res.detail = "s(x) outside Sgn(u(x)) at r = " + std::to_string(r);
      break;
    }
  }
  std::vector<double> cuts = c.breakpoints;
  for (double x : source_breaks(c.f)) cuts.push_back(x);
  for (const auto& b : family.bumps) {
    const double rho2 = b.rho * b.rho;
    const auto v = bump_integral<3>(c.N, b, cuts, [&](double r, double cs, double w, double d) {
      const double dphi_dr = -6 * w * w * (r - b.center * cs) / rho2;
      const double phi = w * w * w;
      const double grad = 6 * w * w * d / rho2;
      return std::array<double, 3>{c.z(r) * dphi_dr, (c.lambda * c.s(r) / r + c.f(r)) * phi, grad};
    });
    const double defect = std::abs(v[0] - v[1]) / v[2];
    res.defect = std::max(res.defect, defect);
  }
  if (res.defect >= t.eq) res.pass = false;
  return res;
}

CheckResult check_pairing(const Certificate& c, double k) {
  const Tol t = tolerances(c);
  CheckResult res;
  res.detail = "max relative gap |z.grad T_k u - |grad T_k u|| / |grad T_k u|";
  for (double r : sample_radii(c)) {
    if (std::abs(c.u(r)) >= k) continue;
    const double g = c.du(r);
    if (std::abs(g) <= 1e-10) continue;
    const double gap = std::abs(c.z(r) * g - std::abs(g)) / std::abs(g);
    res.defect = std::max(res.defect, gap);
  }
  res.pass = res.defect <= t.pairing;
  return res;
}

CheckResult check_boundary(const Certificate& c) {
  const Tol t = tolerances(c);
  const double tr = c.normal_trace ? *c.normal_trace : c.z(c.R);
  const double ub = c.u(c.R);
  CheckResult res;
  res.detail = "[z,nu] = " + std::to_string(tr) + ", u = " + std::to_string(ub);
  double dist = std::max(0.0, std::abs(tr) - 1);
  if (std::abs(ub) > 1e-9) dist = std::max(dist, std::abs(tr + (ub > 0 ? 1.0 : -1.0)));
  res.defect = dist;
  res.pass = std::abs(tr) <= 1 + t.sup && (std::abs(ub) <= 1e-9 || dist <= t.trace);
  return res;
}

Verdict verify(const Certificate& c, const TestFunctionFamily& family, double k) {
  return {check_sup(c), check_distributional(c, family), check_pairing(c, k), check_boundary(c)};
}

Verdict verify(const Certificate& c) { return verify(c, TestFunctionFamily::standard(c.R)); }

double bump_sup(const Bump&) { return 1.0; }

double pairing_action(const Certificate& c, double k, const Bump& b) {
  std::vector<double> cuts = c.breakpoints;
  for (double x : level_radii(c.u, k, std::max(0.0, b.center - b.rho), b.center + b.rho)) cuts.push_back(x);
  const auto v = bump_integral<1>(c.N, b, cuts, [&](double r, double, double w, double) {
    const double dt = std::abs(c.u(r)) < k ? c.du(r) : 0.0;
    return std::array<double, 1>{w * w * w * c.z(r) * dt};
  });
  return v[0];
}

double truncated_total_variation(const Certificate& c, double k) {
  std::vector<double> cuts = c.breakpoints;
  for (double x : level_radii(c.u, k, 0, c.R)) cuts.push_back(x);
  return radial_integral(c.N, c.R, cuts, [&](double r) { return std::abs(c.u(r)) < k ? std::abs(c.du(r)) : 0.0; });
}

TruncationTrace pairing_truncation_convergence(const Certificate& c, const std::vector<double>& ks,
                                               const TestFunctionFamily& family) {
  TruncationTrace tr;
  tr.k = ks;
  for (const auto& b : family.bumps) {
    std::vector<double> a;
    for (double k : ks) a.push_back(pairing_action(c, k, b));
    std::vector<double> st;
    for (std::size_t i = 1; i < a.size(); ++i) st.push_back(std::abs(a[i] - a[i - 1]));
    if (!st.empty()) tr.final_step = std::max(tr.final_step, st.back());
    tr.actions.push_back(std::move(a));
    tr.steps.push_back(std::move(st));
  }
  return tr;
}

double gauss_green_check(const Profile& z, const Profile& div_z, const Profile& u, const Profile& du, int N,
                         double R, const std::vector<double>& breakpoints) {
  const double interior = radial_integral(N, R, breakpoints, [&](double r) { return u(r) * div_z(r) + z(r) * du(r); });
  const double boundary = N * unit_ball_volume(N) * std::pow(R, N - 1) * z(R) * u(R);
  return std::abs(interior - boundary);
}

double gauss_green_box(const Planar& zx, const Planar& zy, const Planar& div_z, const Planar& u,
                       const Planar& ux, const Planar& uy, double L) {
  const auto& g = rule_r();
  const int pieces = 8;
  auto line = [&](auto&& h) {
    double s = 0;
    for (int k = 0; k < pieces; ++k) s += g.integrate(h, -L + 2 * L * k / pieces, -L + 2 * L * (k + 1) / pieces);
    return s;
  };
  const double interior = line([&](double y) {
    return line([&](double x) { return u(x, y) * div_z(x, y) + zx(x, y) * ux(x, y) + zy(x, y) * uy(x, y); });
  });
  const double boundary = line([&](double t) {
    return zx(L, t) * u(L, t) - zx(-L, t) * u(-L, t) + zy(t, L) * u(t, L) - zy(t, -L) * u(t, -L);
  });
  return std::abs(interior - boundary);
}

double step_flux_delta_bound(int N, double lambda, double a) {
  const double shell = unit_ball_volume(N) * (1 - std::pow(a, N));
  return (1 - lambda / (N - 1)) / (std::pow(shell, 1.0 / N) * sobolev_constant(N));
}

Certificate zero_with_step_flux(int N, double lambda, double a, double delta, bool printed_flux) {
  if (!(a > 0 && a < 1)) throw DomainError("zero_with_step_flux: need 0 < a < 1");
  if (!(delta > 0)) throw DomainError("zero_with_step_flux: delta must be positive");
  Certificate c;
  c.name = printed_flux ? "zero_with_step_flux_printed" : "zero_with_step_flux";
  c.N = N;
  c.lambda = lambda;
  c.f = SourceSpec::steps({a, 1.0}, {delta});
  const double k = lambda / (N - 1);
  c.u = [](double) { return 0.0; };
  c.du = [](double) { return 0.0; };
  if (printed_flux)
    c.z = [=](double r) { return r <= a ? -k : -(k + delta * r / N); };
  else
    c.z = [=](double r) { return r <= a ? -k : -(k + delta * (std::pow(r, N) - std::pow(a, N)) / (N * std::pow(r, N - 1))); };
  c.s = [](double) { return 1.0; };
  c.breakpoints = {a};
  return c;
}

Certificate cone(int N, double alpha) {
  if (!(alpha >= 0 && alpha < 1)) throw DomainError("cone: need 0 <= alpha < 1");
  Certificate c;
  c.name = "cone";
  c.N = N;
  c.lambda = alpha * (N - 1);
  c.f = SourceSpec::power((1 - alpha) * (N - 1), 1);
  c.u = [](double r) { return 1 - r; };
  c.du = [](double) { return -1.0; };
  c.z = [](double) { return -1.0; };
  c.s = [](double) { return 1.0; };
  return c;
}

Certificate hardy_line_limit(int N, double a, double lambda) {
  if (!(a > lambda) || a > N - 1) throw DomainError("hardy_line_limit: need lambda < a <= N - 1");
  Certificate c;
  c.name = "hardy_line_limit";
  c.N = N;
  c.lambda = lambda;
  c.f = SourceSpec::power(a - lambda, 1);
  c.s = [](double) { return 1.0; };
  if (a == N - 1) {
    c.u = [](double r) { return 1 - r; };
    c.du = [](double) { return -1.0; };
    c.z = [](double) { return -1.0; };
  } else {
    const double m = a / (N - 1);
    c.u = [](double) { return 0.0; };
    c.du = [](double) { return 0.0; };
    c.z = [=](double) { return -m; };
  }
  return c;
}

Certificate singular_power(int N, double alpha) {
  if (!(alpha > 0 && alpha < N - 1)) throw DomainError("singular_power: need 0 < alpha < N - 1");
  Certificate c;
  c.name = "singular_power";
  c.N = N;
  c.lambda = N - 1;
  c.f = SourceSpec::constant(0);
  c.u = [=](double r) { return std::pow(r, -alpha) - 1; };
  c.du = [=](double r) { return -alpha * std::pow(r, -alpha - 1); };
  c.z = [](double) { return -1.0; };
  c.s = [](double) { return 1.0; };
  return c;
}

Certificate from_fields(const RadialField& u, const RadialVectorField& z, double lambda, const SourceSpec& f) {
  if (u.grid.annulus()) throw DomainError("from_fields: certificates are checked on balls");
  Certificate c;
  c.name = "fields";
  c.N = u.grid.N;
  c.R = u.grid.R;
  c.lambda = lambda;
  c.f = f;
  c.numeric = true;
  const VectorXd slope = gradient_radial(u);
  c.u = [u](double r) { return u(r); };
  c.du = [slope, g = u.grid](double r) {
    const auto& x = g.nodes;
    auto it = std::upper_bound(x.data(), x.data() + x.size(), r);
    const int j = std::clamp(int(it - x.data()) - 1, 0, g.M - 1);
    return slope[j];
  };
  c.z = [z](double r) { return z(r); };
  c.s = [](double) { return 1.0; };
  c.breakpoints.assign(u.grid.nodes.data(), u.grid.nodes.data() + u.grid.nodes.size());
  return c;
}

Certificate scale_z(Certificate c, double factor) {
  auto z = c.z;
  c.z = [z, factor](double r) { return factor * z(r); };
  if (c.normal_trace) *c.normal_trace *= factor;
  c.name += "+scale_z";
  return c;
}

Certificate flip_s(Certificate c, double r0, double r1) {
  auto s = c.s;
  c.s = [s, r0, r1](double r) { return (r > r0 && r < r1) ? -1.0 : s(r); };
  c.breakpoints.push_back(r0);
  c.breakpoints.push_back(r1);
  c.name += "+flip_s";
  return c;
}

Certificate shift_u(Certificate c, double shift) {
  auto u = c.u;
  c.u = [u, shift](double r) { return u(r) + shift; };
  c.name += "+shift_u";
  return c;
}

Certificate with_normal_trace(Certificate c, double value) {
  c.normal_trace = value;
  c.name += "+normal_trace";
  return c;
}

}  // namespace hlap

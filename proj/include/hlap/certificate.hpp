#pragma once

#include "hlap/fields.hpp"
#include "hlap/source.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hlap {

using Profile = std::function<double(double)>;

// Radial candidate (u, z, s) on B_R(0): z = z_r(|x|) x/|x|, s = s(|x|).
struct Certificate {
  std::string name;
  int N = 2;
  double R = 1;
  double lambda = 0;
  SourceSpec f;
  Profile u, du, z, s;
  std::vector<double> breakpoints;    // radii where u, z, s or f are not smooth
  std::optional<double> normal_trace; // [z, nu] on |x| = R when not the trace of z
  bool numeric = false;               // numerically extracted z: looser tolerances
};

// phi(x) = (1 - |x - c|^2 / rho^2)^3 with c = (center, 0, ..., 0); radial data make
// the direction of c irrelevant.
struct Bump {
  double center = 0;
  double rho = 0;
};

struct TestFunctionFamily {
  std::vector<Bump> bumps;
  static TestFunctionFamily standard(double R);
};

struct CheckResult {
  bool pass = true;
  double defect = 0;
  std::string detail;
};

CheckResult check_sup(const Certificate& c);
// Definition (1) and s in Sgn(u): max over the family of
// |int z.grad(phi) - int (lambda s/|x| + f) phi| / int |grad phi|.
CheckResult check_distributional(const Certificate& c, const TestFunctionFamily& family);
// Definition (2): z.grad T_k u = |grad T_k u| wherever grad T_k u does not vanish.
CheckResult check_pairing(const Certificate& c, double k = 10);
// Definition (3): [z, nu] in Sgn(-u) on the boundary.
CheckResult check_boundary(const Certificate& c);

struct Verdict {
  CheckResult sup, distributional, pairing, boundary;
  bool all() const { return sup.pass && distributional.pass && pairing.pass && boundary.pass; }
};

Verdict verify(const Certificate& c, const TestFunctionFamily& family, double k = 10);
Verdict verify(const Certificate& c);

// <(z, D T_k u), phi> = int phi z.grad(T_k u) dx
double pairing_action(const Certificate& c, double k, const Bump& b);
double bump_sup(const Bump& b);
// TV(T_k u) on B_R
double truncated_total_variation(const Certificate& c, double k);

struct TruncationTrace {
  std::vector<double> k;
  std::vector<std::vector<double>> actions;  // [bump][k]
  std::vector<std::vector<double>> steps;    // |action_{k+1} - action_k| per bump
  double final_step = 0;                     // max over bumps of the last step
};

TruncationTrace pairing_truncation_convergence(const Certificate& c, const std::vector<double>& ks,
                                               const TestFunctionFamily& family);

// int u div z + int z.grad u - int_{dB_R} [z,nu] u, radial fields on B_R.
double gauss_green_check(const Profile& z, const Profile& div_z, const Profile& u, const Profile& du, int N,
                         double R, const std::vector<double>& breakpoints = {});

using Planar = std::function<double(double, double)>;
// Same identity on the box [-L, L]^2.
double gauss_green_box(const Planar& zx, const Planar& zy, const Planar& div_z, const Planar& u,
                       const Planar& ux, const Planar& uy, double L);

// Paper candidates.
Certificate zero_with_step_flux(int N, double lambda, double a, double delta, bool printed_flux = false);
double step_flux_delta_bound(int N, double lambda, double a);
// u = 1 - |x|, z = -x/|x|, s = 1, lambda = alpha (N-1), f = (1-alpha)(N-1)/|x|
Certificate cone(int N, double alpha);
// limit of the Hardy-line family: 1 - |x| for a = N-1, 0 (with z = -(a/(N-1)) x/|x|) below
Certificate hardy_line_limit(int N, double a, double lambda);
// u = |x|^{-alpha} - 1, z = -x/|x|, s = 1, lambda = N-1, f = 0
Certificate singular_power(int N, double alpha);
// Numerical limit: interpolated u, cellwise z, s = 1.
Certificate from_fields(const RadialField& u, const RadialVectorField& z, double lambda, const SourceSpec& f);

// Perturbations.
Certificate scale_z(Certificate c, double factor);
Certificate flip_s(Certificate c, double r0, double r1);  // s = -1 on r0 < |x| < r1
Certificate shift_u(Certificate c, double shift);
Certificate with_normal_trace(Certificate c, double value);

}  // namespace hlap

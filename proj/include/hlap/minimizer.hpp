#pragma once

#include "hlap/fields.hpp"
#include "hlap/problem.hpp"

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlap {

inline std::vector<double> default_n_schedule() {
  std::vector<double> s;
  for (int k = 0; k <= 10; ++k) s.push_back(std::pow(4.0, k));
  return s;
}

struct MinimizeSettings {
  double grad_tol = 1e-8;
  int max_iters = 20000;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  std::vector<double> n_schedule = default_n_schedule();
  int M = 512;          // radial cells
  double grading = 2;   // radial node clustering
  int n2d = 256;        // planar cells per side
};

// min(|x|^{-p}, n); n = infinity gives the exact weight.
double truncated_weight(double r, double p, double n);
inline constexpr double kNoTruncation = std::numeric_limits<double>::infinity();

// Exact integral of W_n over each radial cell.
VectorXd hardy_cell_weights(const RadialGrid& g, double p, double n);
// Galerkin load vector int F phi_i dx, F = f (+ lambda/|x| in source form), exact.
VectorXd load_vector(const ProblemSpec& spec, const RadialGrid& g);

// Coefficient of the Hardy potential in the energy: lambda in potential form, 0 in source form.
inline double hardy_beta(const ProblemSpec& spec) {
  return spec.hardy_term == HardyTerm::Potential ? spec.lambda : 0.0;
}

// J(u) = (1/p) int |grad u|^p - (beta/p) int W_n |u|^p - int F u
double energy_J(const RadialField& u, double p, double beta, double n, const ProblemSpec& spec);
// Nodal first variation; Dirichlet entries are zero.
VectorXd energy_gradient(const RadialField& u, double p, double beta, double n, const ProblemSpec& spec);

double energy_J(const GridField2D& u, double p, double beta, double n, const ProblemSpec& spec);
VectorXd energy_gradient(const GridField2D& u, double p, double beta, double n, const ProblemSpec& spec);

struct BoundCheck {
  bool ok = true;
  double lhs = 0, rhs = 0;
  std::string variant;  // which norm of f produced the smaller right-hand side
};

struct SolveResult {
  bool planar = false;
  RadialField field;
  GridField2D field2d;
  double energy = 0;
  double grad_norm = 0;  // ||grad J|| / (||load|| + beta ||Hardy part||)
  int iterations = 0;
  double n_used = 0;
  bool converged = false;
  bool negativity_flag = false;
  std::vector<double> energy_trace;
  bool bound_B_ok = true;
  double bound_B_lhs = 0, bound_B_rhs = 0;
  std::string bound_variant;
  VectorXd cell_flux;  // radial: |u'|^{p-2}u' per cell as computed by the solver

  double u_center() const;
  double grad_energy(double p) const;
  RadialVectorField radial_flux(double p) const;
};

class CoercivityLost : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Minimizes J for one truncation level n. Radial domains use the
// convex-concave iteration with an exact convex solve; planar domains use
// preconditioned Armijo descent. An initial field warm-starts the iteration.
SolveResult minimize(const ProblemSpec& spec, double p, double n, const MinimizeSettings& settings = {},
                     const SolveResult* initial = nullptr);
SolveResult n_continuation(const ProblemSpec& spec, double p, const MinimizeSettings& settings = {},
                           const SolveResult* initial = nullptr);

// int |grad u|^p against the Sobolev-form bound, or its Lorentz-form variant when smaller.
BoundCheck verify_apriori_bound(const SolveResult& result, const ProblemSpec& spec, double p);
// Right-hand side alone.
BoundCheck apriori_bound(const ProblemSpec& spec, double p);

}  // namespace hlap

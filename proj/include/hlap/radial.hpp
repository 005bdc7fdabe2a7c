#pragma once

#include "hlap/fields.hpp"
#include "hlap/problem.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace hlap {

double torsion(int N, double R, double p, double r);
double torsion_center(int N, double R, double p);
double torsion_derivative(int N, double R, double p, double r);
double hardy_line(int N, double a, double lambda, double p, double r);
double singular_family(int N, double alpha, double r);

enum class ClosedFormKind { Torsion, HardyLine, ExtremePair, SingularFamily };

struct ClosedForm {
  ClosedFormKind kind = ClosedFormKind::Torsion;
  int N = 2;
  double R = 1, p = 1.5, a = 0, lambda = 0, alpha = 0;

  static ClosedForm make_torsion(int N, double R, double p);
  static ClosedForm make_hardy_line(int N, double a, double lambda, double p);
  static ClosedForm make_extreme_pair(int N);
  static ClosedForm make_singular_family(int N, double alpha);

  double operator()(double r) const;
  double derivative(double r) const;
  // The data the profile solves (the Hardy line and the 1 - |x| pair use the source form).
  ProblemSpec problem() const;
  RadialField sample(const RadialGrid& g) const;
};

// sigma_N int_a^b F r^{N-1} dr with F = f, plus lambda/r in source form.
double source_mass(const ProblemSpec& spec, double a, double b);
// Cumulative masses at the cell midpoints of g.
VectorXd midpoint_masses(const ProblemSpec& spec, const RadialGrid& g);
// Hardy weights over dual cells [rho_{i-1}, rho_i], exact in r^{-p}.
VectorXd dual_hardy_weights(const RadialGrid& g, double p);

// Flux-form residual per cell: q_j - q_src(rho_j), where q = |u'|^{p-2}u' on
// cell j and q_src is the flux the equation predicts at the cell midpoint from
// the integrated right-hand side (natural condition at the origin).
VectorXd strong_residual(const RadialField& u, double p, const ProblemSpec& spec);

struct BvpSettings {
  double tol = 1e-6;
  int max_iters = 60;
  double eps = 1e-10;  // smoothing of (|u|^{p-2}u)' in the Jacobian only
  int lambda_steps = 8;
};

struct BvpResult {
  RadialField field;
  bool converged = false;
  int iterations = 0;
  double residual = 0;
  std::vector<double> residual_history;
  bool coercivity_warning = false;
};

class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, std::vector<double> history = {})
      : std::runtime_error(what), history(std::move(history)) {}
  std::vector<double> history;
};

// Damped Newton on the midpoint collocation of the radial equation in flux
// form. Throws SolverError carrying the residual history on failure.
BvpResult solve_radial_bvp(const ProblemSpec& spec, double p, const RadialGrid& grid,
                           const BvpSettings& settings = {});
BvpResult solve_radial_bvp(const ProblemSpec& spec, double p, const BvpSettings& settings = {});

}  // namespace hlap

#pragma once

#include "hlap/fields.hpp"
#include "hlap/source.hpp"

#include <optional>
#include <string>

namespace hlap {

enum class DomainKind { Ball, Annulus, Disk, Box };

struct Domain {
  DomainKind kind = DomainKind::Ball;
  double R = 1;        // outer radius (ball, annulus, disk)
  double r_inner = 0;  // annulus
  double L = 1;        // box half-width

  double measure(int N) const;
  bool radial() const { return kind == DomainKind::Ball || kind == DomainKind::Annulus; }
  double outer_radius() const;  // radius of the smallest centred ball containing the domain
};

// How lambda enters the equation: as the Hardy potential lambda |u|^{p-2}u/|x|^p,
// or as the fixed source lambda/|x| (its p = 1 form, used by the examples whose
// closed forms solve -Delta_p u = lambda/|x| + f).
enum class HardyTerm { Potential, Source };

struct ProblemSpec {
  int N = 2;
  double lambda = 0;
  HardyTerm hardy_term = HardyTerm::Potential;
  SourceSpec f;
  Domain domain;
  std::optional<double> dual_norm_f;

  void validate() const;
  double measure() const { return domain.measure(N); }
  // Outside 0 < lambda < N - 1 (kept, only flagged).
  bool lambda_outside_hypothesis() const { return !(lambda > 0 && lambda < N - 1); }
  // lambda < ((N-p)/p)^p
  bool coercive(double p) const;
  RadialGrid radial_grid(int M = 512, double grading = 2) const;
  Grid2D grid_2d(int n = 256) const;
};

}  // namespace hlap

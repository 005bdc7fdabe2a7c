#include "hlap/problem.hpp"

#include <cmath>

namespace hlap {

double Domain::measure(int N) const {
  switch (kind) {
    case DomainKind::Ball:
      return unit_ball_volume(N) * std::pow(R, N);
    case DomainKind::Annulus:
      return unit_ball_volume(N) * (std::pow(R, N) - std::pow(r_inner, N));
    case DomainKind::Disk:
      return M_PI * R * R;
    case DomainKind::Box:
      return 4 * L * L;
  }
  return 0;
}

double Domain::outer_radius() const {
  return kind == DomainKind::Box ? std::sqrt(2.0) * L : R;
}

void ProblemSpec::validate() const {
  if (N < 2) throw DomainError("spec: N must be >= 2");
  if (!(lambda >= 0)) throw DomainError("spec: lambda must be nonnegative");
  f.validate();
  switch (domain.kind) {
    case DomainKind::Ball:
      if (!(domain.R > 0)) throw DomainError("spec: ball radius must be positive");
      break;
    case DomainKind::Annulus:
      if (!(domain.r_inner > 0 && domain.R > domain.r_inner))
        throw DomainError("spec: annulus needs 0 < r_inner < R");
      break;
    case DomainKind::Disk:
      if (N != 2) throw DomainError("spec: disk domains are two-dimensional");
      if (!(domain.R > 0)) throw DomainError("spec: disk radius must be positive");
      break;
    case DomainKind::Box:
      if (N != 2) throw DomainError("spec: box domains are two-dimensional");
      if (!(domain.L > 0)) throw DomainError("spec: box half-width must be positive");
      break;
  }
  if (dual_norm_f && !(*dual_norm_f >= 0)) throw DomainError("spec: dual_norm_f must be nonnegative");
}

bool ProblemSpec::coercive(double p) const {
  if (hardy_term == HardyTerm::Source) return true;
  if (!(p < N)) return false;
  return lambda * hardy_multiplier(N, p) < 1;
}

RadialGrid ProblemSpec::radial_grid(int M, double grading) const {
  if (!domain.radial()) throw DomainError("spec: domain is not radial");
  return make_radial_grid(N, domain.R, M, grading,
                          domain.kind == DomainKind::Annulus ? domain.r_inner : 0.0);
}

Grid2D ProblemSpec::grid_2d(int n) const {
  if (domain.kind == DomainKind::Disk) return make_disk_grid(domain.R, n);
  if (domain.kind == DomainKind::Box) return make_box_grid(domain.L, n);
  throw DomainError("spec: domain is not two-dimensional");
}

}  // namespace hlap

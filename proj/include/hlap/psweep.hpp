#pragma once

#include "hlap/minimizer.hpp"
#include "hlap/radial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hlap {

struct SweepSchedule {
  std::vector<double> p_values{1.5, 1.3, 1.2, 1.1, 1.05, 1.02, 1.01};
  void validate(const ProblemSpec& spec) const;
};

struct SweepRecord {
  double p = 0;
  double grad_energy_p = 0;  // int |grad u_p|^p
  double tv = 0;             // int |grad u_p|
  double l1star_norm = 0;    // ||u_p||_{L^{N/(N-1)}}
  double flux_sup = 0;       // sup ||grad u_p|^{p-2} grad u_p|
  double u_center = 0;
  bool failed = false;
  std::string failure;
  std::optional<double> bvp_gap;  // relative L^{N/(N-1)} gap to the collocation solve
};

struct SweepSettings {
  MinimizeSettings minimize;
  bool cross_check = false;  // also run solve_radial_bvp on radial specs
  BvpSettings bvp;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<SolveResult> solves;  // aligned with records; empty fields on failure
};

SweepRecord make_record(const SolveResult& s, double p, const ProblemSpec& spec);
SweepResult run_sweep(const ProblemSpec& spec, const SweepSchedule& schedule, const SweepSettings& settings = {});

enum class ObservedRegime { Vanishing, Bounded, BlowingUp, Inconclusive };
const char* observed_regime_name(ObservedRegime r);

struct AsymptoticReport {
  ObservedRegime regime_observed = ObservedRegime::Inconclusive;
  double slope_l1star = 0;       // least-squares slope of log l1star vs log(p-1)
  double slope_grad_energy = 0;  // same for grad_energy_p
  std::optional<RadialField> limit_field;
  std::string detail;
};

AsymptoticReport detect_regime(const std::vector<SweepRecord>& records);
AsymptoticReport detect_regime(const SweepResult& sweep);

// [(1 - lambda/(N-1)) / (1 - lambda (p/(N-p))^p)]^{p/(p-1)}, cancellation-free near p = 1.
double limit_bracket(int N, double lambda, double p);

struct LimitConstant {
  double closed_form = 1;   // e^{lambda [N/(N-1) - ln(N-1)] / (N-1-lambda)}
  double continued = 1;     // extrapolation of the bracket over p = 1 + 10^{-k}, k = 3..6
  double raw = 1;           // the bracket at p = 1 + 1e-6
  double opposite_sign = 1; // the opposite-sign exponent, e^{-lambda [N - (N-1) ln(N-1)] / ((N-1)(N-1-lambda))}
  std::vector<double> samples;
  double relative_gap() const { return std::abs(continued - closed_form) / closed_form; }
};

LimitConstant limit_constant(int N, double lambda);

// Per-record a priori energy bound; throws DomainError when the smallness condition fails.
std::vector<BoundCheck> bound_trace(const std::vector<SweepRecord>& records, const ProblemSpec& spec);

// tv <= grad_energy_p / p + (p-1)|Omega| / p
bool young_split_holds(const SweepRecord& r, double measure, double slack = 1e-12);

struct FluxLimit {
  RadialVectorField z;
  std::vector<double> flux_sup_trace;
  double p = 0;
  bool hypothesis = false;  // L^N or Lorentz smallness condition holds
  bool sup_ok = true;       // flux_sup at the last p <= 1.05 when the hypothesis holds
};

FluxLimit extract_flux_limit(const SweepResult& sweep, const ProblemSpec& spec);

}  // namespace hlap

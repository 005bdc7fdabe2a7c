#pragma once

#include "hlap/problem.hpp"

#include <optional>
#include <string>

namespace hlap {

enum class Regime { VanishPredicted, ExtremeBounded, BlowupExpected, Unknown };
const char* regime_name(Regime r);

// A source norm; absent when f is not in the space. closed_form marks values
// obtained without sampling (classification tolerance 1e-9 instead of 1e-4).
struct NormValue {
  std::optional<double> value;
  bool closed_form = true;
  std::string note;
};

// |Omega intersected with B_rho|
double radial_measure(const Domain& d, int N, double rho);

NormValue source_LN_norm(const ProblemSpec& spec);
NormValue source_lorentz_norm(const ProblemSpec& spec);

// S_N ||f||_{L^N} + lambda/(N-1); absent when f is not in L^N.
std::optional<double> check_LN(const ProblemSpec& spec);
// gamma ||f||_{L^{N,inf}} + lambda/(N-1)
double check_Lorentz(const ProblemSpec& spec);

struct ConditionReport {
  std::optional<double> lhs_LN;
  std::optional<double> lhs_Lorentz;
  std::optional<double> lhs_dual;
  std::optional<double> sobolev_term;  // S_N ||f||_{L^N}
  Regime regime = Regime::Unknown;
  double tol = 1e-9;
  bool lambda_outside_hypothesis = false;
  std::string note;

  std::optional<double> lhs_min() const;
};

Regime classify(const ProblemSpec& spec, const ConditionReport& report);
ConditionReport evaluate_conditions(const ProblemSpec& spec);

}  // namespace hlap

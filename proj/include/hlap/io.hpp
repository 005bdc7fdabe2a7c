#pragma once

#include "hlap/certificate.hpp"
#include "hlap/conditions.hpp"
#include "hlap/minimizer.hpp"
#include "hlap/psweep.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace hlap {

using Json = nlohmann::ordered_json;

// 17 significant digits, '.' decimal point.
std::string format_double(double x);

Json to_json(const SourceSpec& f);
SourceSpec source_from_json(const Json& j);
Json to_json(const Domain& d);
Domain domain_from_json(const Json& j);
Json to_json(const ProblemSpec& s);
ProblemSpec problem_from_json(const Json& j);
ProblemSpec load_problem(const std::string& path);

Json to_json(const ConditionReport& r);
ConditionReport report_from_json(const Json& j);

Json to_json(const SolveResult& r, double p);
// Scalar summary only; the field itself travels as CSV.
SolveResult solve_summary_from_json(const Json& j);

Json to_json(const SweepRecord& r);
SweepRecord record_from_json(const Json& j);
Json to_json(const AsymptoticReport& r);
AsymptoticReport asymptotic_from_json(const Json& j, int N);
ObservedRegime observed_regime_from_name(const std::string& s);
Regime regime_from_name(const std::string& s);

Json to_json(const CheckResult& c);
Json to_json(const Verdict& v, const std::string& name);
Verdict verdict_from_json(const Json& j);
Json to_json(const LimitConstant& c);
LimitConstant limit_constant_from_json(const Json& j);

// r,u on nodes (radial) or x,y,u on active nodes (planar).
void write_field_csv(std::ostream& os, const RadialField& u);
void write_field_csv(std::ostream& os, const GridField2D& u);
// r,z one row per cell at its midpoint.
void write_flux_csv(std::ostream& os, const RadialVectorField& z);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_sweep_csv(std::istream& is);
// Reads an r,u node table back into a field on those nodes.
RadialField read_field_csv(std::istream& is, int N);
// Reads an r,z midpoint table onto the grid of u.
RadialVectorField read_flux_csv(std::istream& is, const RadialGrid& grid);

// Certificate description: {"candidate": name, parameters..., "perturb": [...]}.
// Field certificates reference CSV files by path, relative to base_dir.
Certificate certificate_from_json(const Json& j, const std::string& base_dir = ".");

}  // namespace hlap

#include "hlap/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hlap {

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> opt_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double num(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_number()) throw DomainError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> nums(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_array()) throw DomainError(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw DomainError(std::string("field '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

int integer(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_number_integer()) throw DomainError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> split_row(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw DomainError("csv: cannot parse '" + cell + "'");
    }
  }
  return out;
}

// Data rows of a CSV with a header line; '#' lines are comments.
std::vector<std::vector<double>> read_rows(std::istream& is, std::size_t width) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    auto r = split_row(line);
    if (r.size() != width) throw DomainError("csv: expected " + std::to_string(width) + " columns");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const SourceSpec& f) {
  Json j;
  j["kind"] = f.kind_name();
  switch (f.kind) {
    case SourceSpec::Kind::Constant: j["c"] = f.c; break;
    case SourceSpec::Kind::Power:
      j["c"] = f.c;
      j["b"] = f.b;
      break;
    case SourceSpec::Kind::Steps:
      j["edges"] = f.edges;
      j["values"] = f.values;
      break;
    case SourceSpec::Kind::Tabulated:
      j["r"] = f.edges;
      j["values"] = f.values;
      break;
  }
  return j;
}

SourceSpec source_from_json(const Json& j) {
  const std::string kind = need(j, "kind").get<std::string>();
  if (kind == "constant") return SourceSpec::constant(num(j, "c"));
  if (kind == "power") return SourceSpec::power(num(j, "c"), num(j, "b"));
  if (kind == "steps") return SourceSpec::steps(nums(j, "edges"), nums(j, "values"));
  if (kind == "tabulated") return SourceSpec::tabulated(nums(j, "r"), nums(j, "values"));
  throw DomainError("unknown source kind '" + kind + "'");
}

Json to_json(const Domain& d) {
  Json j;
  switch (d.kind) {
    case DomainKind::Ball:
      j["kind"] = "ball";
      j["R"] = d.R;
      break;
    case DomainKind::Annulus:
      j["kind"] = "annulus";
      j["r_inner"] = d.r_inner;
      j["R"] = d.R;
      break;
    case DomainKind::Disk:
      j["kind"] = "disk";
      j["R"] = d.R;
      break;
    case DomainKind::Box:
      j["kind"] = "box";
      j["L"] = d.L;
      break;
  }
  return j;
}

Domain domain_from_json(const Json& j) {
  Domain d;
  const std::string kind = need(j, "kind").get<std::string>();
  if (kind == "ball") {
    d.kind = DomainKind::Ball;
    d.R = num(j, "R");
  } else if (kind == "annulus") {
    d.kind = DomainKind::Annulus;
    d.R = num(j, "R");
    d.r_inner = num(j, "r_inner");
  } else if (kind == "disk") {
    d.kind = DomainKind::Disk;
    d.R = num(j, "R");
  } else if (kind == "box") {
    d.kind = DomainKind::Box;
    d.L = num(j, "L");
  } else {
    throw DomainError("unknown domain kind '" + kind + "'");
  }
  return d;
}

Json to_json(const ProblemSpec& s) {
  Json j;
  j["N"] = s.N;
  j["lambda"] = s.lambda;
  j["hardy_term"] = s.hardy_term == HardyTerm::Potential ? "potential" : "source";
  j["f"] = to_json(s.f);
  j["domain"] = to_json(s.domain);
  j["dual_norm_f"] = opt(s.dual_norm_f);
  return j;
}

ProblemSpec problem_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("problem spec must be a JSON object");
  static const char* known[] = {"N", "lambda", "hardy_term", "f", "domain", "dual_norm_f"};
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) throw DomainError("unknown field '" + k + "' in problem spec");
  }
  ProblemSpec s;
  s.N = integer(j, "N");
  s.lambda = j.contains("lambda") ? num(j, "lambda") : 0.0;
  if (j.contains("hardy_term")) {
    const std::string h = j.at("hardy_term").get<std::string>();
    if (h == "potential") s.hardy_term = HardyTerm::Potential;
    else if (h == "source") s.hardy_term = HardyTerm::Source;
    else throw DomainError("hardy_term must be 'potential' or 'source'");
  }
  s.f = source_from_json(need(j, "f"));
  s.domain = domain_from_json(need(j, "domain"));
  s.dual_norm_f = opt_from(j, "dual_norm_f");
  s.validate();
  return s;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed JSON in '") + path + "': " + e.what());
  }
  try {
    return problem_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad problem spec: ") + e.what());
  }
}

Json to_json(const ConditionReport& r) {
  Json j;
  j["lhs_LN"] = opt(r.lhs_LN);
  j["lhs_Lorentz"] = opt(r.lhs_Lorentz);
  j["lhs_dual"] = opt(r.lhs_dual);
  j["sobolev_term"] = opt(r.sobolev_term);
  j["regime"] = regime_name(r.regime);
  j["tol"] = r.tol;
  j["lambda_outside_hypothesis"] = r.lambda_outside_hypothesis;
  j["note"] = r.note;
  return j;
}

Regime regime_from_name(const std::string& s) {
  for (Regime r : {Regime::VanishPredicted, Regime::ExtremeBounded, Regime::BlowupExpected, Regime::Unknown})
    if (s == regime_name(r)) return r;
  throw DomainError("unknown regime '" + s + "'");
}

ObservedRegime observed_regime_from_name(const std::string& s) {
  for (ObservedRegime r : {ObservedRegime::Vanishing, ObservedRegime::Bounded, ObservedRegime::BlowingUp,
                           ObservedRegime::Inconclusive})
    if (s == observed_regime_name(r)) return r;
  throw DomainError("unknown regime '" + s + "'");
}

ConditionReport report_from_json(const Json& j) {
  ConditionReport r;
  r.lhs_LN = opt_from(j, "lhs_LN");
  r.lhs_Lorentz = opt_from(j, "lhs_Lorentz");
  r.lhs_dual = opt_from(j, "lhs_dual");
  r.sobolev_term = opt_from(j, "sobolev_term");
  r.regime = regime_from_name(need(j, "regime").get<std::string>());
  r.tol = num(j, "tol");
  r.lambda_outside_hypothesis = need(j, "lambda_outside_hypothesis").get<bool>();
  r.note = need(j, "note").get<std::string>();
  return r;
}

Json to_json(const SolveResult& r, double p) {
  Json j;
  j["p"] = p;
  j["planar"] = r.planar;
  j["converged"] = r.converged;
  j["energy"] = r.energy;
  j["grad_norm"] = r.grad_norm;
  j["iterations"] = r.iterations;
  j["n_used"] = std::isinf(r.n_used) ? Json(nullptr) : Json(r.n_used);
  j["u_center"] = r.u_center();
  j["grad_energy_p"] = r.grad_energy(p);
  j["negativity_flag"] = r.negativity_flag;
  j["bound_B_ok"] = r.bound_B_ok;
  j["bound_B_lhs"] = r.bound_B_lhs;
  j["bound_B_rhs"] = r.bound_B_rhs;
  j["bound_variant"] = r.bound_variant;
  j["energy_trace"] = r.energy_trace;
  return j;
}

SolveResult solve_summary_from_json(const Json& j) {
  SolveResult r;
  r.planar = need(j, "planar").get<bool>();
  r.converged = need(j, "converged").get<bool>();
  r.energy = num(j, "energy");
  r.grad_norm = num(j, "grad_norm");
  r.iterations = integer(j, "iterations");
  r.n_used = opt_from(j, "n_used").value_or(kNoTruncation);
  r.negativity_flag = need(j, "negativity_flag").get<bool>();
  r.bound_B_ok = need(j, "bound_B_ok").get<bool>();
  r.bound_B_lhs = num(j, "bound_B_lhs");
  r.bound_B_rhs = num(j, "bound_B_rhs");
  r.bound_variant = need(j, "bound_variant").get<std::string>();
  r.energy_trace = nums(j, "energy_trace");
  num(j, "u_center");
  num(j, "grad_energy_p");
  return r;
}

Json to_json(const SweepRecord& r) {
  Json j;
  j["p"] = r.p;
  j["grad_energy_p"] = r.grad_energy_p;
  j["tv"] = r.tv;
  j["l1star_norm"] = r.l1star_norm;
  j["flux_sup"] = r.flux_sup;
  j["u_center"] = r.u_center;
  j["failed"] = r.failed;
  j["failure"] = r.failure;
  j["bvp_gap"] = opt(r.bvp_gap);
  return j;
}

SweepRecord record_from_json(const Json& j) {
  SweepRecord r;
  r.p = num(j, "p");
  r.grad_energy_p = num(j, "grad_energy_p");
  r.tv = num(j, "tv");
  r.l1star_norm = num(j, "l1star_norm");
  r.flux_sup = num(j, "flux_sup");
  r.u_center = num(j, "u_center");
  r.failed = need(j, "failed").get<bool>();
  r.failure = need(j, "failure").get<std::string>();
  r.bvp_gap = opt_from(j, "bvp_gap");
  return r;
}

Json to_json(const AsymptoticReport& r) {
  Json j;
  j["regime_observed"] = observed_regime_name(r.regime_observed);
  j["slope_l1star"] = r.slope_l1star;
  j["slope_grad_energy"] = r.slope_grad_energy;
  j["detail"] = r.detail;
  if (r.limit_field) {
    j["limit_field"] = {{"r", std::vector<double>(r.limit_field->grid.nodes.data(),
                                                  r.limit_field->grid.nodes.data() + r.limit_field->grid.nodes.size())},
                        {"u", std::vector<double>(r.limit_field->values.data(),
                                                  r.limit_field->values.data() + r.limit_field->values.size())}};
  } else {
    j["limit_field"] = nullptr;
  }
  return j;
}

AsymptoticReport asymptotic_from_json(const Json& j, int N) {
  AsymptoticReport r;
  r.regime_observed = observed_regime_from_name(need(j, "regime_observed").get<std::string>());
  r.slope_l1star = num(j, "slope_l1star");
  r.slope_grad_energy = num(j, "slope_grad_energy");
  r.detail = need(j, "detail").get<std::string>();
  const Json& lf = need(j, "limit_field");
  if (!lf.is_null()) {
    const auto rr = nums(lf, "r"), uu = nums(lf, "u");
    if (rr.size() != uu.size() || rr.size() < 2) throw DomainError("limit_field: r and u must match");
    RadialField f;
    f.grid.N = N;
    f.grid.M = int(rr.size()) - 1;
    f.grid.nodes = Eigen::Map<const VectorXd>(rr.data(), Eigen::Index(rr.size()));
    f.grid.r_inner = rr.front();
    f.grid.R = rr.back();
    f.values = Eigen::Map<const VectorXd>(uu.data(), Eigen::Index(uu.size()));
    r.limit_field = f;
  }
  return r;
}

Json to_json(const CheckResult& c) {
  Json j;
  j["pass"] = c.pass;
  j["defect"] = c.defect;
  j["detail"] = c.detail;
  return j;
}

Json to_json(const Verdict& v, const std::string& name) {
  Json j;
  j["name"] = name;
  j["pass"] = v.all();
  j["checks"] = {{"sup", to_json(v.sup)},
                 {"distributional", to_json(v.distributional)},
                 {"pairing", to_json(v.pairing)},
                 {"boundary", to_json(v.boundary)}};
  Json failing = Json::array();
  if (!v.sup.pass) failing.push_back("sup");
  if (!v.distributional.pass) failing.push_back("distributional");
  if (!v.pairing.pass) failing.push_back("pairing");
  if (!v.boundary.pass) failing.push_back("boundary");
  j["failing"] = failing;
  return j;
}

namespace {

CheckResult check_from_json(const Json& j) {
  return {need(j, "pass").get<bool>(), num(j, "defect"), need(j, "detail").get<std::string>()};
}

}  // namespace

Verdict verdict_from_json(const Json& j) {
  const Json& c = need(j, "checks");
  Verdict v{check_from_json(need(c, "sup")), check_from_json(need(c, "distributional")),
            check_from_json(need(c, "pairing")), check_from_json(need(c, "boundary"))};
  if (need(j, "pass").get<bool>() != v.all()) throw DomainError("verdict: pass flag disagrees with the checks");
  return v;
}

Json to_json(const LimitConstant& c) {
  Json j;
  j["closed_form"] = c.closed_form;
  j["continued"] = c.continued;
  j["raw"] = c.raw;
  j["opposite_sign"] = c.opposite_sign;
  j["relative_gap"] = c.relative_gap();
  return j;
}

LimitConstant limit_constant_from_json(const Json& j) {
  LimitConstant c;
  c.closed_form = num(j, "closed_form");
  c.continued = num(j, "continued");
  c.raw = num(j, "raw");
  c.opposite_sign = num(j, "opposite_sign");
  return c;
}

void write_field_csv(std::ostream& os, const RadialField& u) {
  os << "r,u\n";
  for (Eigen::Index i = 0; i < u.values.size(); ++i)
    os << format_double(u.grid.nodes[i]) << ',' << format_double(u.values[i]) << '\n';
}

void write_field_csv(std::ostream& os, const GridField2D& u) {
  const auto& g = u.grid;
  os << "x,y,u\n";
  for (int j = 0; j <= g.n; ++j)
    for (int i = 0; i <= g.n; ++i)
      if (g.mask[g.index(i, j)])
        os << format_double(g.x(i)) << ',' << format_double(g.x(j)) << ',' << format_double(u.values[g.index(i, j)])
           << '\n';
}

void write_flux_csv(std::ostream& os, const RadialVectorField& z) {
  os << "r,z\n";
  for (int j = 0; j < z.grid.M; ++j) os << format_double(z.grid.midpoint(j)) << ',' << format_double(z.radial[j]) << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << "p,grad_energy_p,tv,l1star_norm,flux_sup,u_center\n";
  for (const auto& r : records) {
    if (r.failed) continue;
    os << format_double(r.p) << ',' << format_double(r.grad_energy_p) << ',' << format_double(r.tv) << ','
       << format_double(r.l1star_norm) << ',' << format_double(r.flux_sup) << ',' << format_double(r.u_center) << '\n';
  }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& is) {
  std::vector<SweepRecord> out;
  for (const auto& row : read_rows(is, 6)) {
    SweepRecord r;
    r.p = row[0];
    r.grad_energy_p = row[1];
    r.tv = row[2];
    r.l1star_norm = row[3];
    r.flux_sup = row[4];
    r.u_center = row[5];
    out.push_back(r);
  }
  return out;
}

RadialField read_field_csv(std::istream& is, int N) {
  const auto rows = read_rows(is, 2);
  if (rows.size() < 9) throw DomainError("field csv: need at least 9 nodes");
  RadialField u;
  u.grid.N = N;
  u.grid.M = int(rows.size()) - 1;
  u.grid.nodes.resize(rows.size());
  u.values.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    u.grid.nodes[i] = rows[i][0];
    u.values[i] = rows[i][1];
    if (i > 0 && !(rows[i][0] > rows[i - 1][0])) throw DomainError("field csv: radii must increase");
  }
  u.grid.r_inner = u.grid.nodes[0];
  u.grid.R = u.grid.nodes[u.grid.M];
  return u;
}

RadialVectorField read_flux_csv(std::istream& is, const RadialGrid& grid) {
  const auto rows = read_rows(is, 2);
  if (int(rows.size()) != grid.M) throw DomainError("flux csv: expected one row per cell of the field grid");
  RadialVectorField z{grid, VectorXd(grid.M)};
  for (int j = 0; j < grid.M; ++j) {
    if (std::abs(rows[j][0] - grid.midpoint(j)) > 1e-9 * (1 + grid.R))
      throw DomainError("flux csv: radii do not match the field grid midpoints");
    z.radial[j] = rows[j][1];
  }
  return z;
}

Certificate certificate_from_json(const Json& j, const std::string& base_dir) {
  try {
    const std::string cand = need(j, "candidate").get<std::string>();
    Certificate c;
    if (cand == "zero_with_step_flux") {
      const int N = integer(j, "N");
      const double lambda = num(j, "lambda"), a = num(j, "a");
      const double delta = j.contains("delta") ? num(j, "delta")
                                               : num(j, "delta_fraction") * step_flux_delta_bound(N, lambda, a);
      const bool printed = j.contains("printed_flux") && j.at("printed_flux").get<bool>();
      c = zero_with_step_flux(N, lambda, a, delta, printed);
    } else if (cand == "cone") {
      c = cone(integer(j, "N"), num(j, "alpha"));
    } else if (cand == "hardy_line_limit") {
      c = hardy_line_limit(integer(j, "N"), num(j, "a"), num(j, "lambda"));
    } else if (cand == "singular_power") {
      c = singular_power(integer(j, "N"), num(j, "alpha"));
    } else if (cand == "fields") {
      const int N = integer(j, "N");
      auto path = [&](const char* key) {
        std::filesystem::path p = need(j, key).get<std::string>();
        return p.is_absolute() ? p : std::filesystem::path(base_dir) / p;
      };
      std::ifstream uin(path("u_csv")), zin(path("z_csv"));
      if (!uin || !zin) throw DomainError("certificate: cannot open field files");
      const RadialField u = read_field_csv(uin, N);
      const RadialVectorField z = read_flux_csv(zin, u.grid);
      c = from_fields(u, z, num(j, "lambda"), source_from_json(need(j, "f")));
    } else {
      throw DomainError("unknown candidate '" + cand + "'");
    }
    if (j.contains("perturb")) {
      for (const auto& p : j.at("perturb")) {
        const std::string kind = need(p, "kind").get<std::string>();
        if (kind == "scale_z") c = scale_z(c, num(p, "factor"));
        else if (kind == "flip_s") c = flip_s(c, num(p, "r0"), num(p, "r1"));
        else if (kind == "shift_u") c = shift_u(c, num(p, "shift"));
        else if (kind == "normal_trace") c = with_normal_trace(c, num(p, "value"));
        else throw DomainError("unknown perturbation '" + kind + "'");
      }
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad certificate: ") + e.what());
  }
}

}  // namespace hlap

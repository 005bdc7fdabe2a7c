// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--expect-fail K]...
//
// Exits 0 when the set of failing criteria equals the set given by
// --expect-fail (empty by default), 1 otherwise.

#include "hlap/certificate.hpp"
#include "hlap/cli.hpp"
#include "hlap/io.hpp"
#include "hlap/psweep.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace hlap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

fs::path g_dir;

std::string write_spec(const std::string& name, const std::string& text) {
  const auto p = (g_dir / name).string();
  std::ofstream(p) << text;
  return p;
}

Json cli_json(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = run_cli(args, out, err);
  return Json::parse(out.str().empty() ? "null" : out.str());
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string hardy_line_json(int N, double a, double lambda) {
  return "{\"N\": " + std::to_string(N) + ", \"lambda\": " + format_double(lambda) +
         ", \"hardy_term\": \"source\", \"f\": {\"kind\": \"power\", \"c\": " + format_double(a - lambda) +
         ", \"b\": 1}, \"domain\": {\"kind\": \"ball\", \"R\": 1}}";
}

double sup_abs(const VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

Outcome torsion() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = write_spec("torsion.json",
                               R"({"N": 2, "lambda": 0, "f": {"kind": "constant", "c": 1}, "domain": {"kind": "ball", "R": 1}})");
  int code = 0;
  const Json j = cli_json({"solve", spec, "--p", "1.5", "--M", "512", "--out", (g_dir / "torsion").string()}, code);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (code != kOk) return {false, "solve exit " + std::to_string(code)};
  std::ifstream csv(g_dir / "torsion.csv");
  const RadialField u = read_field_csv(csv, 2);
  double err = 0;
  for (int i = 0; i <= u.grid.M; ++i) err = std::max(err, std::abs(u.values[i] - hlap::torsion(2, 1, 1.5, u.grid.nodes[i])));
  const double u0 = j["u_center"].get<double>();
  const bool ok = std::abs(u0 - 1.0 / 12) <= 1e-3 && err <= 1e-3 && u.grid.M == 512 && secs < 5;
  return {ok, "u(0) = " + format_double(u0) + ", sup error " + fmt(err) + " at M = 512, " + fmt(secs) + " s"};
}

Outcome hardy_line_solve() {
  const auto spec = write_spec("hl.json", hardy_line_json(3, 1, 0.5));
  int code = 0;
  const Json j = cli_json({"solve", spec, "--p", "1.5", "--out", (g_dir / "hl").string()}, code);
  if (code != kOk) return {false, "solve exit " + std::to_string(code)};
  const double u0 = j["u_center"].get<double>();
  const bool bound = j["bound_B_ok"].get<bool>();
  return {std::abs(u0 - 0.25) <= 1e-3 && bound,
          "u(0) = " + format_double(u0) + ", bound " + (bound ? "holds" : "violated") + " (" +
              j["bound_variant"].get<std::string>() + " variant, " + fmt(j["bound_B_lhs"].get<double>()) +
              " <= " + fmt(j["bound_B_rhs"].get<double>()) + ")"};
}

Outcome trichotomy() {
  struct Case {
    std::string name, json, expected;
  };
  const std::vector<Case> cases = {
      {"a = 0.8(N-1)", hardy_line_json(3, 1.6, 0.5), "Vanishing"},
      {"a = N-1", hardy_line_json(3, 2.0, 0.5), "Bounded"},
      {"f = 1, R = N+1", R"({"N": 2, "lambda": 0, "f": {"kind": "constant", "c": 1}, "domain": {"kind": "ball", "R": 3}})",
       "BlowingUp"}};
  bool ok = true;
  std::string detail;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto spec = write_spec("tri" + std::to_string(k) + ".json", cases[k].json);
    int code = 0;
    const Json j = cli_json({"sweep", spec, "--out", (g_dir / ("tri" + std::to_string(k))).string()}, code);
    const std::string got = code == kOk ? j["report"]["regime_observed"].get<std::string>() : "exit " + std::to_string(code);
    ok = ok && got == cases[k].expected;
    detail += cases[k].name + " -> " + got + "; ";
    if (cases[k].expected == "Bounded" && code == kOk) {
      const auto rep = asymptotic_from_json(j["report"], 3);
      double err = INFINITY;
      if (rep.limit_field) {
        err = 0;
        for (int i = 0; i <= rep.limit_field->grid.M; ++i)
          err = std::max(err, std::abs(rep.limit_field->values[i] - (1 - rep.limit_field->grid.nodes[i])));
      }
      ok = ok && err <= 5e-3;
      detail += "limit vs 1-|x| sup " + fmt(err) + "; ";
    }
  }
  return {ok, detail};
}

Outcome limit_constants() {
  bool ok = true;
  double worst_cont = 0, worst_raw = 0;
  int negative = 0;
  for (int N : {2, 3, 4, 5})
    for (double t : {0.25, 0.5, 0.75}) {
      const auto c = limit_constant(N, t * (N - 1));
      worst_cont = std::max(worst_cont, c.relative_gap());
      worst_raw = std::max(worst_raw, std::abs(c.raw - c.closed_form) / c.closed_form);
      ok = ok && c.relative_gap() <= 1e-6;
      // the opposite-sign exponent must be rejected by the continuation
      ok = ok && std::abs(c.opposite_sign - c.continued) / c.continued > 1e-3;
      if (c.closed_form < 1) ++negative;
    }
  return {ok, "closed form vs continued bracket: max relative gap " + fmt(worst_cont) + " (raw p = 1 + 1e-6: " +
                  fmt(worst_raw) + "); the opposite-sign exponent disagrees on all 12 pairs, " +
                  std::to_string(negative) + " pairs with negative exponent"};
}

Outcome certificates() {
  const double bound = step_flux_delta_bound(3, 0.5, 0.5);
  const std::vector<Certificate> accepted = {zero_with_step_flux(3, 0.5, 0.5, 0.5 * bound), cone(3, 0.5),
                                             hardy_line_limit(3, 2, 0.5), singular_power(3, 1),
                                             singular_power(4, 2), singular_power(2, 0.5)};
  bool accept_ok = true;
  std::string detail;
  for (const auto& c : accepted) {
    const auto v = verify(c);
    accept_ok = accept_ok && v.all();
    if (!v.all()) detail += c.name + " rejected; ";
  }
  detail += accept_ok ? "6/6 reference certificates accepted; " : "";

  auto failing = [](const Verdict& v) {
    std::string s;
    if (!v.sup.pass) s += "sup ";
    if (!v.distributional.pass) s += "distributional ";
    if (!v.pairing.pass) s += "pairing ";
    if (!v.boundary.pass) s += "boundary ";
    return s.empty() ? std::string("none") : s.substr(0, s.size() - 1);
  };
  struct Probe {
    std::string name, target;
    Certificate c;
  };
  const std::vector<Probe> probes = {{"scale_z 1.1", "sup", scale_z(cone(3, 0.5), 1.1)},
                                     {"flip_s on 0.2<|x|<0.4", "distributional", flip_s(cone(3, 0.5), 0.2, 0.4)},
                                     {"[z,nu] = +1 with u = 0.5 on the boundary", "boundary",
                                      with_normal_trace(shift_u(cone(3, 0.5), 0.5), 1)}};
  bool perturb_ok = true;
  for (const auto& p : probes) {
    const std::string f = failing(verify(p.c));
    perturb_ok = perturb_ok && f == p.target;
    detail += p.name + " fails {" + f + "} (target " + p.target + "); ";
  }
  if (!perturb_ok)
    detail += "scaling z by 1.1 on a certificate with |z| = 1 also breaks the equation, the pairing and the trace; "
              "where |z| < 1 it leaves the sup check intact, so no single-check flip exists";
  return {accept_ok && perturb_ok, detail};
}

RadialField random_radial(std::mt19937& rng, int N) {
  std::uniform_real_distribution<double> val(-1, 1);
  const auto g = make_radial_grid(N, 1.0, 48, 1.0);
  VectorXd v(49);
  for (int i = 0; i < 48; ++i) v[i] = val(rng);
  v[48] = 0;
  return RadialField(g, v);
}

Outcome inequalities() {
  std::mt19937 rng(2024);
  int hardy = 0, sob = 0, holder = 0, bad = 0;
  for (int trial = 0; trial < 100; ++trial)
    for (int N : {2, 3, 4}) {
      for (double p : {1.0, 1.25, 1.5}) {
        const auto u = random_radial(rng, N);
        bad += interpolant_integral(u, p, p) > hardy_multiplier(N, p) * p_energy(u, p) * (1 + 1e-9);
        ++hardy;
      }
      const auto u = random_radial(rng, N);
      bad += lp_norm(u, double(N) / (N - 1)) > sobolev_constant(N) * total_variation(u) * (1 + 1e-9);
      ++sob;
      const auto g = make_radial_grid(N, 1.0, 40);
      const VectorXd m = cell_measures(g);
      std::uniform_real_distribution<double> val(-2, 2);
      VectorXd a(40), b(40);
      for (int j = 0; j < 40; ++j) a[j] = val(rng), b[j] = val(rng);
      const double lhs = std::abs((a.array() * b.array() * m.array()).sum());
      const double rhs = lorentz_norm(SampledFunction<>(a, m), LorentzIndex::weak(N)) *
                         lorentz_norm(SampledFunction<>(b, m), LorentzIndex{double(N) / (N - 1), 1});
      bad += lhs > rhs + 1e-9;
      ++holder;
    }
  double eq = 0;
  std::uniform_real_distribution<double> val(-3, 3), meas(0.01, 1);
  for (int trial = 0; trial < 100; ++trial) {
    VectorXd v(25), m(25);
    for (int i = 0; i < 25; ++i) v[i] = val(rng), m[i] = meas(rng);
    const SampledFunction<> f(v, m);
    const Rearrangement<> r(f);
    for (int i = 0; i < 25; ++i)
      eq = std::max(eq, std::abs(distribution_function(f, std::abs(v[i])) - r.level_measure(std::abs(v[i]))) /
                            f.total_measure());
  }
  return {bad == 0 && eq <= 1e-14,
          std::to_string(hardy) + " Hardy, " + std::to_string(sob) + " Sobolev, " + std::to_string(holder) +
              " Lorentz-Hoelder samples, " + std::to_string(bad) + " violations; equimeasurability error " + fmt(eq)};
}

ProblemSpec hardy_line_spec(int N, double a, double lambda) {
  return ClosedForm::make_hardy_line(N, a, lambda, 1.5).problem();
}

Outcome scheme_fidelity() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> val(-1, 1);
  double fd = 0;
  {
    ProblemSpec s;
    s.N = 3;
    s.lambda = 0.3;
    s.f = SourceSpec::power(0.5, 0.5);
    const auto g = s.radial_grid(24);
    for (int k = 0; k < 50; ++k) {
      VectorXd u(g.M + 1), phi(g.M + 1);
      for (int i = 0; i < g.M; ++i) u[i] = val(rng), phi[i] = val(rng);
      u[g.M] = phi[g.M] = 0;
      const double h = 1e-5;
      const double num = (energy_J(RadialField(g, u + h * phi), 1.4, 0.3, 32, s) -
                          energy_J(RadialField(g, u - h * phi), 1.4, 0.3, 32, s)) / (2 * h);
      const double an = energy_gradient(RadialField(g, u), 1.4, 0.3, 32, s).dot(phi);
      fd = std::max(fd, std::abs(an - num) / std::max(1.0, std::abs(an)));
    }
  }
  ProblemSpec tor;
  tor.N = 2;
  tor.f = SourceSpec::constant(1);
  ProblemSpec big = tor;
  big.domain.R = 3;
  std::vector<SolveResult> solves = {n_continuation(tor, 1.5), n_continuation(hardy_line_spec(3, 1, 0.5), 1.5)};
  int records = 0, young_bad = 0, trace_bad = 0, bound_bad = 0, converged = 0;
  for (const auto& spec : {hardy_line_spec(3, 1.6, 0.5), hardy_line_spec(3, 2, 0.5), big}) {
    const auto sw = run_sweep(spec, {});
    for (std::size_t k = 0; k < sw.records.size(); ++k) {
      if (sw.records[k].failed) continue;
      ++records;
      young_bad += !young_split_holds(sw.records[k], spec.measure());
      solves.push_back(sw.solves[k]);
    }
    if (spec.domain.R == 1)
      for (const auto& b : bound_trace(sw.records, spec)) bound_bad += !b.ok;
  }
  for (const auto& s : solves) {
    if (!s.converged) continue;
    ++converged;
    bound_bad += !s.bound_B_ok;
    for (std::size_t k = 1; k < s.energy_trace.size(); ++k)
      trace_bad += s.energy_trace[k] > s.energy_trace[k - 1] + 1e-14 * std::abs(s.energy_trace[k - 1]);
  }
  // the a priori bounds need the smallness condition, which the R = N+1 sweep violates by design
  return {fd <= 1e-6 && trace_bad == 0 && bound_bad == 0 && young_bad == 0,
          "finite differences " + fmt(fd) + " on 50 pairs; " + std::to_string(converged) +
              " converged solves, energy increases " + std::to_string(trace_bad) + ", bound violations " +
              std::to_string(bound_bad) + "; Young split fails on " + std::to_string(young_bad) + "/" +
              std::to_string(records) + " records"};
}

Outcome flux_limit() {
  bool ok = true;
  std::string detail;
  for (double alpha : {0.0, 0.25, 0.5}) {
    const int N = 3;
    const auto spec = hardy_line_spec(N, N - 1.0, alpha * (N - 1));
    const auto fl = extract_flux_limit(run_sweep(spec, {}), spec);
    double dev = 0;
    for (int j = 0; j < fl.z.grid.M; ++j) {
      const double r = fl.z.grid.midpoint(j);
      if (r >= 0.1 && r <= 0.9) dev = std::max(dev, std::abs(fl.z.radial[j] + 1));
    }
    const double sup = fl.z.sup_norm();
    ok = ok && fl.p == 1.01 && dev <= 0.05 && sup <= 1.02;
    detail += "alpha " + fmt(alpha) + ": |z_r + 1| <= " + fmt(dev) + ", sup " + format_double(sup) + "; ";
  }
  return {ok, detail};
}

Outcome extremal_identity() {
  bool ok = true;
  std::string detail;
  for (int N : {2, 3, 4, 5}) {
    const auto g = make_radial_grid(N, 1.0, 4096, 1.0);
    VectorXd v(g.M);
    for (int j = 0; j < g.M; ++j) v[j] = (N - 1) / g.nodes[j + 1];
    const double val = gamma_constant(N) * lorentz_norm(SampledFunction<>(v, cell_measures(g)), LorentzIndex::weak(N));
    ok = ok && std::abs(val - 1) <= 1e-6;
    detail += "N=" + std::to_string(N) + ": " + format_double(val) + "; ";
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      expected.insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--expect-fail K]...\n";
      return 2;
    }
  }
  g_dir = fs::temp_directory_path() / ("hlap_acceptance_" + std::to_string(getpid()));
  fs::create_directories(g_dir);

  const std::vector<std::pair<std::string, Outcome (*)()>> criteria = {
      {"torsion reproduction", torsion},
      {"Hardy-line reproduction", hardy_line_solve},
      {"trichotomy", trichotomy},
      {"limit constant", limit_constants},
      {"certificate suite", certificates},
      {"inequality properties", inequalities},
      {"scheme fidelity", scheme_fidelity},
      {"flux limit", flux_limit},
      {"extremal identity", extremal_identity}};

  std::set<int> failed;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) failed.insert(int(k + 1));
    std::cout << "criterion " << k + 1 << " [" << criteria[k].first << "]: " << (o.pass ? "PASS" : "FAIL") << "  "
              << o.detail << std::endl;
  }
  fs::remove_all(g_dir);
  if (failed != expected) {
    std::cout << "failing set differs from the expected set\n";
    return 1;
  }
  return 0;
}

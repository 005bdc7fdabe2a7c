#include "hlap/cli.hpp"
#include "hlap/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hlap {

namespace {

std::vector<double> parse_schedule(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("schedule: cannot parse '" + item + "'");
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + path + "'");
  f << text;
}

template <class F>
std::string render(F&& f) {
  std::ostringstream os;
  f(os);
  return os.str();
}

int cmd_check(const std::string& path, std::ostream& out) {
  const ProblemSpec spec = load_problem(path);
  out << to_json(evaluate_conditions(spec)).dump(2) << '\n';
  return kOk;
}

int cmd_solve(const std::string& path, double p, const std::string& prefix, const MinimizeSettings& st,
              std::ostream& out, std::ostream& err) {
  const ProblemSpec spec = load_problem(path);
  if (!(p > 1) || !(p < spec.N)) throw DomainError("solve: need 1 < p < N");
  SolveResult r;
  try {
    r = n_continuation(spec, p, st);
  } catch (const CoercivityLost& e) {
    err << "coercivity lost: " << e.what() << '\n';
    return kCoercivityLost;
  }
  const std::string js = to_json(r, p).dump(2) + "\n";
  write_file(prefix + ".json", js);
  write_file(prefix + ".csv", render([&](std::ostream& os) {
               if (r.planar) write_field_csv(os, r.field2d); else write_field_csv(os, r.field);
             }));
  if (!r.planar) write_file(prefix + "_flux.csv", render([&](std::ostream& os) { write_flux_csv(os, r.radial_flux(p)); }));
  out << js;
  if (!r.converged) {
    err << "minimizer did not converge (grad_norm " << format_double(r.grad_norm) << ")\n";
    return kNotConverged;
  }
  return kOk;
}

int cmd_sweep(const std::string& path, const std::string& schedule, const std::string& prefix,
              const MinimizeSettings& st, std::ostream& out) {
  const ProblemSpec spec = load_problem(path);
  SweepSchedule sched;
  if (!schedule.empty()) sched.p_values = parse_schedule(schedule);
  sched.validate(spec);
  SweepSettings settings;
  settings.minimize = st;
  const SweepResult sw = run_sweep(spec, sched, settings);
  const AsymptoticReport rep = detect_regime(sw);

  Json j;
  j["schedule"] = sched.p_values;
  j["report"] = to_json(rep);
  Json recs = Json::array();
  for (const auto& r : sw.records) recs.push_back(to_json(r));
  j["records"] = recs;
  Json young = Json::array();
  for (const auto& r : sw.records) young.push_back(r.failed ? Json(nullptr) : Json(young_split_holds(r, spec.measure())));
  j["young_split"] = young;
  j["flux_limit"] = nullptr;
  if (spec.domain.radial()) {
    try {
      const FluxLimit fl = extract_flux_limit(sw, spec);
      j["flux_limit"] = {{"p", fl.p}, {"flux_sup_trace", fl.flux_sup_trace}, {"hypothesis", fl.hypothesis},
                         {"sup_ok", fl.sup_ok}};
      write_file(prefix + "_flux.csv", render([&](std::ostream& os) { write_flux_csv(os, fl.z); }));
    } catch (const DomainError&) {
      // fewer than two converged solves: no flux limit to report
    }
  }
  // the report's limit field is the one serialized above; also tabulate it
  if (rep.limit_field)
    write_file(prefix + "_limit.csv", render([&](std::ostream& os) { write_field_csv(os, *rep.limit_field); }));
  write_file(prefix + ".csv", render([&](std::ostream& os) { write_sweep_csv(os, sw.records); }));
  const std::string js = j.dump(2) + "\n";
  write_file(prefix + ".json", js);
  out << js;
  return kOk;
}

int cmd_verify(const std::string& path, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed JSON: ") + e.what());
  }
  const auto base = std::filesystem::path(path).parent_path().string();
  const Certificate c = certificate_from_json(j, base.empty() ? "." : base);
  const Verdict v = verify(c);
  out << to_json(v, c.name).dump(2) << '\n';
  return v.all() ? kOk : kVerifyFailed;
}

int cmd_constants(int N, double lambda, std::ostream& out) {
  if (N < 2) throw DomainError("constants: N must be >= 2");
  Json j;
  j["N"] = N;
  j["lambda"] = lambda;
  j["S_N"] = sobolev_constant(N);
  j["gamma"] = gamma_constant(N);
  Json curve = Json::array();
  for (int k = 0; k < 10; ++k) {
    const double p = 1 + k * (N - 1) / 10.0;
    curve.push_back({{"p", p}, {"hardy_constant", std::pow((N - p) / p, p)}});
  }
  j["hardy_p_curve"] = curve;
  if (lambda >= 0 && lambda < N - 1) {
    const LimitConstant lc = limit_constant(N, lambda);
    j["limit_constant"] = lc.closed_form;
    j["limit_constant_detail"] = to_json(lc);
  } else {
    j["limit_constant"] = nullptr;
    j["limit_constant_detail"] = nullptr;
  }
  out << j.dump(2) << '\n';
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-Laplacian with Hardy potential: conditions, solves, p-sweeps and 1-Laplacian certificates", "hlap"};
  app.require_subcommand(1, 1);

  std::string spec_path, out_prefix, schedule, cert_path;
  double p = 0, lambda = 0;
  int N = 2;
  MinimizeSettings st;

  auto* check = app.add_subcommand("check", "evaluate the smallness conditions of a problem spec");
  check->add_option("spec", spec_path, "problem spec JSON")->required();

  auto* solve = app.add_subcommand("solve", "minimize the energy at one p");
  solve->add_option("spec", spec_path, "problem spec JSON")->required();
  solve->add_option("--p", p, "exponent, 1 < p < N")->required();
  solve->add_option("--out", out_prefix, "output prefix for .json and .csv")->required();
  solve->add_option("--M", st.M, "radial cells")->check(CLI::Range(8, 1 << 20));
  solve->add_option("--n2d", st.n2d, "planar cells per side")->check(CLI::Range(8, 4096));

  auto* sweep = app.add_subcommand("sweep", "run the p -> 1 sweep and classify the limit");
  sweep->add_option("spec", spec_path, "problem spec JSON")->required();
  sweep->add_option("--schedule", schedule, "comma-separated decreasing p values");
  sweep->add_option("--out", out_prefix, "output prefix")->required();
  sweep->add_option("--M", st.M, "radial cells")->check(CLI::Range(8, 1 << 20));
  sweep->add_option("--n2d", st.n2d, "planar cells per side")->check(CLI::Range(8, 4096));

  auto* ver = app.add_subcommand("verify", "check a candidate solution of the 1-Laplacian problem");
  ver->add_option("cert", cert_path, "certificate JSON")->required();

  auto* cons = app.add_subcommand("constants", "print the sharp constants for N and lambda");
  cons->add_option("--N", N, "dimension")->required();
  cons->add_option("--lambda", lambda, "Hardy parameter");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }

  try {
    if (*check) return cmd_check(spec_path, out);
    if (*solve) return cmd_solve(spec_path, p, out_prefix, st, out, err);
    if (*sweep) return cmd_sweep(spec_path, schedule, out_prefix, st, out);
    if (*ver) return cmd_verify(cert_path, out);
    if (*cons) return cmd_constants(N, lambda, out);
  } catch (const CoercivityLost& e) {
    err << "coercivity lost: " << e.what() << '\n';
    return kCoercivityLost;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}

}  // namespace hlap

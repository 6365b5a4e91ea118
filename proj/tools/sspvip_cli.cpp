// Command-line front end: generate problems, certify parameters, solve,
// verify against the independent references, and emit reductions. Exit codes:
// 0 success/converged, 2 not converged / verification failed, 3 infeasible
// parameters, 4 I/O or validation errors.

#include <cstdio>
#include <future>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sspvip/io.hpp"

namespace {

using namespace sspvip;

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

struct RunConfig {
  std::string problem_path;
  std::string moduli_path;
  std::string out_path;
  std::string trace_path = "trace.csv";
  std::string spec_path;
  std::string rho = "auto";
  std::string lambda = "auto";
  std::string gamma = "auto";
  std::string schedule = "const:0.9";
  std::size_t max_iters = 100000;
  double tol = 1e-9;
  std::size_t trace_every = 1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string dims = "4,4,3,3";
  std::string kinds = "box,box,box,box";
  std::string method = "extragradient";
  std::string reduction_case;
  double verify_tol = 1e-6;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

double parse_double(const std::string& s, const char* name) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw IoError(std::string(name) + ": expected a number or 'auto', got '" + s + "'");
  }
}

std::string failed_hypotheses(const CertificationReport& rep) {
  std::string out;
  auto add = [&](const char* which, const IndexConstants& c) {
    auto line = [&](const std::string& s) {
      out += std::string(out.empty() ? "" : "; ") + which + ": " + s;
    };
    if (!c.beta_ok)
      line("own-Lipschitz coefficient must exceed p (beta > p fails)");
    if (!c.q_ok) line("q < 1 fails");
    if (c.beta_ok && c.q_ok && !c.alpha_ok)
      line("strong-monotonicity margin fails (alpha <= p*q + sqrt((beta^2-p^2)(1-q^2)))");
  };
  add("index 1", rep.index1);
  add("index 2", rep.index2);
  if (out.empty()) out = "feasible interval is empty";
  return out;
}

// Shared parameter resolution: certified moduli -> (rho, lambda, gamma),
// honoring "auto" per flag.
struct ResolvedParams {
  ProblemModuli moduli;
  CertificationReport report;
  SolverParams params;
};

ResolvedParams resolve_params(const SspvipProblem& p, const RunConfig& cfg) {
  ResolvedParams r;
  r.moduli = certified_problem_moduli(p);
  const double lambda =
      cfg.lambda == "auto" ? auto_lambda(r.moduli) : parse_double(cfg.lambda, "--lambda");
  r.report = convergence_constants(r.moduli, lambda);
  double rho;
  if (cfg.rho == "auto") {
    if (!r.report.rho_interval)
      throw AnalysisError("auto rho: feasible interval is empty (" +
                          failed_hypotheses(r.report) + ")");
    rho = r.report.rho_interval->midpoint();
  } else {
    rho = parse_double(cfg.rho, "--rho");
  }
  double gamma;
  if (cfg.gamma == "auto") {
    gamma = std::isfinite(r.report.gamma_interval.hi) ? r.report.gamma_interval.midpoint()
                                                      : 1.0;
  } else {
    gamma = parse_double(cfg.gamma, "--gamma");
  }
  r.params.rho = rho;
  r.params.lambda = lambda;
  r.params.gamma = gamma;
  r.params.alpha_schedule = parse_schedule(cfg.schedule);
  r.params.max_iters = cfg.max_iters;
  r.params.tol = cfg.tol;
  r.params.trace_every = cfg.trace_every;
  r.report = certify(r.moduli, rho, lambda, gamma);
  return r;
}

SspvipProblem load_validated(const std::string& path) {
  SspvipProblem p = read_problem(path);
  const auto violations = validate(p);
  if (!violations.empty()) {
    std::string msg = "problem failed validation:";
    for (const auto& v : violations) msg += "\n  - " + v;
    throw IoError(msg);
  }
  return p;
}

Candidate default_start(const SspvipProblem& p) {
  return Candidate{project(p.set_x, Vec(p.dims.x, 0.0)),
                   project(p.set_y, Vec(p.dims.y, 0.0))};
}

int cmd_solve(const RunConfig& cfg) {
  SspvipProblem p = load_validated(cfg.problem_path);
  ResolvedParams r = resolve_params(p, cfg);
  std::cout << "params: rho=" << format_double(r.params.rho)
            << " lambda=" << format_double(r.params.lambda)
            << " gamma=" << format_double(r.params.gamma)
            << " certified=" << (r.report.certified ? "yes" : "no") << "\n";
  SolveResult res;
  try {
    res = solve(p, r.params, default_start(p));
  } catch (const SolverDivergence& e) {
    write_trace_csv(cfg.trace_path, e.trace);
    std::cerr << "solver diverged: " << e.what() << "\n";
    return kExitNotConverged;
  }
  write_trace_csv(cfg.trace_path, res.trace);
  const ResidualReport fin = residuals(p, res.final, r.params.rho, r.params.lambda);
  const std::string out = cfg.out_path.empty() ? "result.json" : cfg.out_path;
  write_json_file(out, result_to_json(res, r.params, fin));
  if (res.schedule_warning)
    std::cerr << "warning: custom schedule partial sum below 10 within the iteration "
                 "budget; convergence is unlikely\n";
  std::cout << (res.converged ? "converged" : "not converged") << " after "
            << res.iterations << " iterations, max residual "
            << format_double(fin.max_residual()) << "\n";
  return res.converged ? kExitOk : kExitNotConverged;
}

void print_report_table(const CertificationReport& rep) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("undefined");
  };
  auto row = [&](const char* which, const IndexConstants& c) {
    std::cout << which << ": theta_image=" << format_double(c.theta_image)
              << " delta=" << format_double(c.delta) << " p=" << format_double(c.p)
              << " q=" << format_double(c.q) << " center=" << opt(c.center)
              << " radius=" << opt(c.radius) << " hypotheses="
              << (c.all_ok() ? "ok" : "failed") << "\n";
  };
  std::cout << "lambda: " << format_double(rep.lambda) << "\n";
  row("index 1", rep.index1);
  row("index 2", rep.index2);
  if (rep.rho_interval)
    std::cout << "rho interval: (" << format_double(rep.rho_interval->lo) << ", "
              << format_double(rep.rho_interval->hi) << ")\n";
  else
    std::cout << "rho interval: empty\n";
  std::cout << "gamma interval: (0, "
            << (std::isfinite(rep.gamma_interval.hi)
                    ? format_double(rep.gamma_interval.hi)
                    : std::string("unbounded"))
            << ")\n";
  if (rep.theta) std::cout << "contraction theta: " << format_double(*rep.theta) << "\n";
  std::cout << "certified: " << (rep.certified ? "yes" : "no") << "\n";
}

int cmd_check_params(const RunConfig& cfg) {
  ProblemModuli moduli;
  if (!cfg.moduli_path.empty()) {
    moduli = problem_moduli_from_json(read_json_file(cfg.moduli_path));
  } else if (!cfg.problem_path.empty()) {
    moduli = certified_problem_moduli(load_validated(cfg.problem_path));
  } else {
    throw IoError("check-params: need --problem or --moduli");
  }
  const double lambda =
      cfg.lambda == "auto" ? auto_lambda(moduli) : parse_double(cfg.lambda, "--lambda");
  CertificationReport rep = convergence_constants(moduli, lambda);
  double rho = 0.0;
  bool have_rho = false;
  if (cfg.rho == "auto") {
    if (rep.rho_interval) {
      rho = rep.rho_interval->midpoint();
      have_rho = true;
    }
  } else {
    rho = parse_double(cfg.rho, "--rho");
    have_rho = true;
  }
  if (have_rho) {
    const double gamma = cfg.gamma == "auto"
                             ? (std::isfinite(rep.gamma_interval.hi)
                                    ? rep.gamma_interval.midpoint()
                                    : 1.0)
                             : parse_double(cfg.gamma, "--gamma");
    rep = certify(moduli, rho, lambda, gamma);
  }
  print_report_table(rep);
  if (!cfg.out_path.empty()) write_json_file(cfg.out_path, report_to_json(rep));
  return rep.certified ? kExitOk : kExitInfeasible;
}

int cmd_generate(const RunConfig& cfg) {
  GeneratorSpec spec;
  std::uint64_t seed = cfg.seed;
  if (!cfg.spec_path.empty()) {
    std::uint64_t file_seed = seed;
    spec = genspec_from_json(read_json_file(cfg.spec_path), &file_seed);
    if (!cfg.seed_given) seed = file_seed;
  } else {
    const auto dims = split(cfg.dims, ',');
    if (dims.size() != 4) throw IoError("--dims: expected four comma-separated sizes");
    spec.dims = Dims{std::stoul(dims[0]), std::stoul(dims[1]), std::stoul(dims[2]),
                     std::stoul(dims[3])};
    const auto kinds = split(cfg.kinds, ',');
    if (kinds.size() != 4) throw IoError("--kinds: expected four comma-separated kinds");
    spec.kind_x = set_kind_from_name(kinds[0]);
    spec.kind_y = set_kind_from_name(kinds[1]);
    spec.kind_u = set_kind_from_name(kinds[2]);
    spec.kind_v = set_kind_from_name(kinds[3]);
  }
  SspvipProblem p = generate_synthetic(spec, seed);
  const std::string out = cfg.out_path.empty() ? "problem.json" : cfg.out_path;
  write_problem(out, p);
  std::cout << "wrote " << out << " (seed " << seed << ")\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  SspvipProblem p = load_validated(cfg.problem_path);
  ResolvedParams r = resolve_params(p, cfg);
  auto solver_future = std::async(std::launch::async, [&] {
    return solve(p, r.params, default_start(p));
  });
  OracleSolution oracle;
  if (cfg.method == "extragradient") {
    oracle = extragradient_reference(p, 1e-8, 200000);
  } else if (cfg.method == "kkt-1d") {
    oracle = kkt_enumerate_1d(p);
  } else if (cfg.method == "planted") {
    oracle = planted_reference(p);
  } else {
    throw IoError("--method: expected extragradient, kkt-1d, or planted");
  }
  SolveResult res = solver_future.get();
  CrossCheckReport check = cross_check(res.final, oracle.candidate, cfg.verify_tol);
  json verdict{{"version", "sspvip-verdict-v1"},
               {"method", oracle_method_name(oracle.method)},
               {"solver_converged", res.converged},
               {"solver_iterations", res.iterations},
               {"distance", check.distance},
               {"tol", check.tol},
               {"pass", check.pass && res.converged},
               {"oracle_certificate", residual_report_to_json(oracle.certificate)},
               {"oracle", {{"x", oracle.candidate.x}, {"y", oracle.candidate.y}}},
               {"solver", {{"x", res.final.x}, {"y", res.final.y}}}};
  if (p.planted)
    verdict["planted_distance"] = starred_distance(res.final, *p.planted);
  const std::string out = cfg.out_path.empty() ? "verdict.json" : cfg.out_path;
  write_json_file(out, verdict);
  std::cout << "verify: method=" << oracle_method_name(oracle.method)
            << " distance=" << format_double(check.distance)
            << " pass=" << (verdict["pass"].get<bool>() ? "yes" : "no") << "\n";
  return verdict["pass"].get<bool>() ? kExitOk : kExitNotConverged;
}

int cmd_reduce(const RunConfig& cfg) {
  SspvipProblem p = load_validated(cfg.problem_path);
  SspvipProblem reduced;
  if (cfg.reduction_case == "svip") {
    reduced = reduce_to_svip(p);
  } else if (cfg.reduction_case == "spvip") {
    reduced = reduce_to_spvip(p);
  } else {
    throw IoError("--case: expected svip or spvip");
  }
  const std::string out = cfg.out_path.empty() ? "reduced.json" : cfg.out_path;
  write_problem(out, reduced);
  std::cout << "wrote " << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection methods for coupled and split variational inequalities"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_param_flags = [&](CLI::App* c) {
    c->add_option("--rho", cfg.rho, "step for the VI projections, or 'auto'");
    c->add_option("--lambda", cfg.lambda, "step for the image projections, or 'auto'");
    c->add_option("--gamma", cfg.gamma, "correction weight, or 'auto'");
    c->add_option("--schedule", cfg.schedule,
                  "relaxation schedule: const:<a>, harmonic:<offset>, or custom:<a0,a1,...>");
    c->add_option("--max-iters", cfg.max_iters, "iteration budget");
    c->add_option("--tol", cfg.tol, "residual tolerance");
    c->add_option("--trace-every", cfg.trace_every, "trace row stride");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "run the corrected projection method");
  solve_cmd->add_option("--problem", cfg.problem_path, "problem JSON")->required();
  add_param_flags(solve_cmd);
  solve_cmd->add_option("--trace", cfg.trace_path, "trace CSV output path");
  solve_cmd->add_option("-o,--out", cfg.out_path, "result JSON output path");

  CLI::App* check_cmd = app.add_subcommand("check-params", "evaluate certification constants");
  check_cmd->add_option("--problem", cfg.problem_path, "problem JSON");
  check_cmd->add_option("--moduli", cfg.moduli_path, "moduli-set JSON");
  check_cmd->add_option("--rho", cfg.rho, "step for the VI projections, or 'auto'");
  check_cmd->add_option("--lambda", cfg.lambda, "step for the image projections, or 'auto'");
  check_cmd->add_option("--gamma", cfg.gamma, "correction weight, or 'auto'");
  check_cmd->add_option("-o,--out", cfg.out_path, "report JSON output path");

  CLI::App* gen_cmd = app.add_subcommand("generate", "generate a planted synthetic problem");
  gen_cmd->add_option("--seed", cfg.seed, "random seed");
  gen_cmd->add_option("--dims", cfg.dims, "dimensions n1,n2,n3,n4");
  gen_cmd->add_option("--kinds", cfg.kinds, "set kinds for C1,C2,C3,C4");
  gen_cmd->add_option("--spec", cfg.spec_path, "generator-spec JSON (overrides flags)");
  gen_cmd->add_option("-o,--out", cfg.out_path, "problem JSON output path");

  CLI::App* verify_cmd = app.add_subcommand("verify", "cross-check solver against a reference");
  verify_cmd->add_option("--problem", cfg.problem_path, "problem JSON")->required();
  verify_cmd->add_option("--method", cfg.method, "extragradient, kkt-1d, or planted");
  verify_cmd->add_option("--verify-tol", cfg.verify_tol, "agreement tolerance");
  add_param_flags(verify_cmd);
  verify_cmd->add_option("-o,--out", cfg.out_path, "verdict JSON output path");

  CLI::App* reduce_cmd = app.add_subcommand("reduce", "emit a case-I or case-II reduction");
  reduce_cmd->add_option("--problem", cfg.problem_path, "problem JSON")->required();
  reduce_cmd->add_option("--case", cfg.reduction_case, "svip (case II) or spvip (case I)")
      ->required();
  reduce_cmd->add_option("-o,--out", cfg.out_path, "reduced problem JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitIo : kExitOk;
  }
  cfg.seed_given = gen_cmd->count("--seed") > 0;

  try {
    if (solve_cmd->parsed()) return cmd_solve(cfg);
    if (check_cmd->parsed()) return cmd_check_params(cfg);
    if (gen_cmd->parsed()) return cmd_generate(cfg);
    if (verify_cmd->parsed()) return cmd_verify(cfg);
    if (reduce_cmd->parsed()) return cmd_reduce(cfg);
  } catch (const AnalysisError& e) {
    std::cerr << "infeasible parameters: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const SolverDivergence& e) {
    std::cerr << "solver diverged: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const OracleError& e) {
    std::cerr << "oracle: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitIo;
}

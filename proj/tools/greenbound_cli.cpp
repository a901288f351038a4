// Command-line front end: sweep, fit, solve, oracle, bench.
//
// Exit codes: 0 ok, 1 configuration error, 2 numeric failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "greenbound/io.hpp"
#include "greenbound/greenbound.hpp"

namespace {

using namespace greenbound;

constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

struct RunOptions {
  std::string potential = "inverted-gaussian";
  std::string table;
  double well_width = 1.0;
  double half_width = 20.0;
  long points = 4001;
  double x_ref = 0.0;
  double u_tolerance = 1e-10;
  double lambda_tolerance = 1e-12;
  int max_iterations = 500;
  std::string out;
  std::string format = "csv";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string config;

  // Subcommand-specific.
  std::string eps = "0.3:1.0:8";
  double lambda = 0.0;
  std::string strategy = "accelerated";
  std::string strategies = "accelerated,naive";
  std::string targets = "0.7,1.0,1.3";
  std::string seeds;
  std::string bracket = "0.1,1.5";
  double tol = 1e-6;
  int cap = 12;
  std::string form = "auto";
  std::string input;
};

void add_common(CLI::App* sub, RunOptions& o) {
  sub->add_option("--potential", o.potential,
                  "inverted-gaussian | poschl-teller | square-well | path to an 'x V' table")
      ->capture_default_str();
  sub->add_option("--table", o.table, "Path to an 'x V' table (overrides --potential)");
  sub->add_option("--well-width", o.well_width, "Half-width of the square well")->capture_default_str();
  sub->add_option("--L", o.half_width, "Domain half-width")->capture_default_str();
  sub->add_option("--N", o.points, "Grid point count (odd)")->capture_default_str();
  sub->add_option("--xref", o.x_ref, "Normalization point (must be a grid point)")->capture_default_str();
  sub->add_option("--u-tol", o.u_tolerance, "Sup-norm tolerance on successive iterates")->capture_default_str();
  sub->add_option("--lambda-tol", o.lambda_tolerance, "Relative tolerance on successive lambda estimates")
      ->capture_default_str();
  sub->add_option("--max-iter", o.max_iterations, "Iteration cap per solve")->capture_default_str();
  sub->add_option("--out", o.out, "Output file (default: standard output)");
  sub->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--threads", o.threads, "Worker threads for sweeps")->capture_default_str();
  sub->add_option("--config", o.config, "Flat key=value file; command-line flags override it");
}

Potential resolve_potential(const RunOptions& o) {
  if (!o.table.empty()) return load_tabulated_file(o.table);
  if (o.potential == "inverted-gaussian") return inverted_gaussian<double>();
  if (o.potential == "poschl-teller") return poschl_teller<double>();
  if (o.potential == "square-well") return square_well<double>(o.well_width);
  if (!std::filesystem::exists(o.potential)) {
    throw ConfigError("potential '" + o.potential + "' is neither a bundled name nor an existing file");
  }
  return load_tabulated_file(o.potential);
}

IterationConfig iteration_config(const RunOptions& o) {
  IterationConfig cfg;
  cfg.x_ref = o.x_ref;
  cfg.u_tolerance = o.u_tolerance;
  cfg.lambda_tolerance = o.lambda_tolerance;
  cfg.max_iterations = o.max_iterations;
  return cfg;
}

struct Problem {
  Grid grid;
  Potential potential;
  IterationConfig cfg;
};

/// Builds and validates everything a solve needs before any computation.
Problem make_problem(const RunOptions& o) {
  Grid grid = make_grid(o.half_width, static_cast<Eigen::Index>(o.points));
  Potential potential = resolve_potential(o);
  IterationConfig cfg = iteration_config(o);
  validate_config(cfg, grid);
  validate_on_grid(potential, grid);
  if (!(potential(cfg.x_ref) > 0.0)) {
    throw ConfigError("--xref: V(x_ref) must be positive, got " + io::format_number(potential(cfg.x_ref)));
  }
  return {std::move(grid), std::move(potential), std::move(cfg)};
}

/// Data goes to --out or stdout; the human summary goes to stdout unless the
/// data already occupies it, in which case it goes to stderr.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ConfigError("--out: cannot open '" + path + "' for writing");
      file_->imbue(std::locale::classic());
    }
  }
  std::ostream& data() { return file_ ? *file_ : std::cout; }
  std::ostream& summary() { return file_ ? std::cout : std::cerr; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int cmd_sweep(const RunOptions& o) {
  const auto problem = make_problem(o);
  const auto eps = io::parse_range(o.eps);
  for (double e : eps) {
    if (!(e > 0.0)) throw ConfigError("--eps: energies must be positive");
  }
  const auto result = sweep(problem.grid, problem.potential, problem.cfg, eps, o.threads);

  Output out(o.out);
  if (o.format == "json") {
    auto arr = nlohmann::json::array();
    for (const auto& r : result.rows) {
      arr.push_back({{"epsilon", r.sample.epsilon},
                     {"lambda", r.sample.lambda},
                     {"iterations", r.iterations},
                     {"residual", r.sample.residual}});
    }
    out.data() << arr.dump(2) << '\n';
  } else {
    io::write_sweep_csv(out.data(), result);
  }

  auto& s = out.summary();
  s << "sweep: " << result.rows.size() << " of " << eps.size() << " energies converged";
  if (!result.rows.empty()) {
    const auto [lo, hi] = std::minmax_element(result.rows.begin(), result.rows.end(),
                                              [](const auto& a, const auto& b) { return a.sample.lambda < b.sample.lambda; });
    s << "; lambda in [" << io::format_number(lo->sample.lambda) << ", " << io::format_number(hi->sample.lambda) << "]";
  }
  if (result.rows.size() >= 2) {
    try {
      const auto line = fit_symmetric(result.samples(), problem.cfg.u_tolerance);
      s << "; line fit lambda = " << io::format_number(line.a1) << " + " << io::format_number(line.a3) << " * eps";
    } catch (const NumericError&) {
    }
  }
  s << '\n';
  for (const auto& f : result.failures) {
    std::cerr << "eps=" << io::format_number(f.epsilon) << ": " << f.reason << '\n';
  }
  return result.failures.empty() ? 0 : kExitNumeric;
}

int cmd_fit(const RunOptions& o) {
  const auto rows = io::read_sweep_csv_file(o.input);
  std::vector<SamplePoint> samples;
  for (const auto& r : rows) samples.push_back(r.sample);

  const bool symmetric = o.form == "symmetric" || (o.form == "auto" && o.x_ref == 0.0);
  const auto model = symmetric ? fit_symmetric(samples, o.u_tolerance) : fit_general(samples, o.x_ref, o.u_tolerance);

  Output out(o.out);
  out.data() << io::model_to_json(model).dump(2) << '\n';
  out.summary() << "fit (" << (symmetric ? "symmetric" : "general") << ", " << samples.size()
                << " samples): a1 = " << io::format_number(model.a1) << ", a2 = " << io::format_number(model.a2)
                << ", a3 = " << io::format_number(model.a3) << '\n';
  return 0;
}

Strategy parse_strategy(const std::string& name) {
  if (name == "accelerated" || name == "model_accelerated") return Strategy::model_accelerated;
  if (name == "naive" || name == "bisection") return Strategy::bisection;
  if (name == "interpolation" || name == "naive_interpolation") return Strategy::naive_interpolation;
  throw ConfigError("unknown strategy '" + name + "'");
}

SolveOptions solve_options(const RunOptions& o) {
  SolveOptions opts;
  opts.seeds = io::parse_list(o.seeds);
  const auto bracket = io::parse_list(o.bracket);
  if (bracket.size() != 2) throw ConfigError("--bracket must be 'eps_lo,eps_hi'");
  opts.bracket = {bracket[0], bracket[1]};
  if (!(o.tol > 0.0)) throw ConfigError("--tol must be positive");
  opts.tol_rel = o.tol;
  if (o.cap < 1) throw ConfigError("--cap must be >= 1");
  opts.solve_cap = o.cap;
  return opts;
}

int cmd_solve(const RunOptions& o) {
  if (!(o.lambda > 0.0)) throw ConfigError("--lambda must be positive");
  const auto problem = make_problem(o);
  const auto strategy = parse_strategy(o.strategy);
  const auto opts = solve_options(o);

  Output out(o.out);
  auto emit = [&](const SolveReport& report) {
    out.data() << io::report_to_json(report).dump(2) << '\n';
    out.summary() << "solve (" << to_string(report.strategy) << "): lambda " << io::format_number(report.target_lambda)
                  << " -> eps = " << io::format_number(report.final_epsilon) << " after "
                  << report.full_solves_used << " full solves (" << report.total_inner_iterations
                  << " iterations)" << (report.converged ? "" : " [NOT CONVERGED]") << '\n';
  };
  try {
    emit(solve_for_lambda(strategy, problem.grid, problem.potential, problem.cfg, o.lambda, opts));
  } catch (const SolveFailure& e) {
    emit(e.partial_report());
    throw;
  }
  return 0;
}

int cmd_oracle(const RunOptions& o) {
  if (!(o.lambda > 0.0)) throw ConfigError("--lambda must be positive");
  const Grid grid = make_grid(o.half_width, static_cast<Eigen::Index>(o.points));
  const Potential potential = resolve_potential(o);
  validate_on_grid(potential, grid);
  const auto result = oracle_ground_state(grid, potential, o.lambda, o.x_ref);
  Output out(o.out);
  out.data() << io::oracle_to_json(result, potential.name, o.lambda).dump(2) << '\n';
  out.summary() << "oracle: lambda " << io::format_number(o.lambda) << " -> eps = " << io::format_number(result.epsilon)
                << '\n';
  return 0;
}

int cmd_bench(const RunOptions& o) {
  const auto targets = io::parse_list(o.targets);
  for (double t : targets) {
    if (!(t > 0.0)) throw ConfigError("--targets must be positive");
  }
  std::vector<Strategy> strategies;
  std::istringstream names(o.strategies);
  for (std::string name; std::getline(names, name, ',');) strategies.push_back(parse_strategy(name));
  if (strategies.empty()) throw ConfigError("--strategies must not be empty");

  const auto problem = make_problem(o);
  const auto table = benchmark(problem.grid, problem.potential, problem.cfg, targets, strategies, solve_options(o));

  Output out(o.out);
  if (o.format == "json") {
    out.data() << io::benchmark_to_json(table).dump(2) << '\n';
  } else {
    io::write_benchmark_csv(out.data(), table);
  }
  for (const auto& cell : table) {
    out.summary() << "bench: lambda " << io::format_number(cell.target_lambda) << " " << to_string(cell.strategy)
                  << ": " << (cell.report ? cell.report->full_solves_used : 0) << " solves"
                  << (cell.error.empty() ? "" : " (" + cell.error + ")") << '\n';
  }
  return 0;
}

/// Expands `--config FILE` into `--key value` tokens placed directly after the
/// subcommand, so explicit flags later on the line take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path || args.size() < 2) return args;
  std::vector<std::string> out{args[0], args[1]};
  for (const auto& [key, value] : io::read_config_file(*path)) {
    if (key == "config") continue;
    out.push_back("--" + key);
    out.push_back(value);
  }
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::locale::global(std::locale::classic());
  RunOptions o;

  CLI::App app{"Green's-function bound-state solver with lambda(eps) model inversion"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  auto* sweep_cmd = app.add_subcommand("sweep", "Solve at a range of energies and write epsilon,lambda rows");
  add_common(sweep_cmd, o);
  sweep_cmd->add_option("--eps", o.eps, "start:stop:count")->capture_default_str();

  auto* fit_cmd = app.add_subcommand("fit", "Fit the lambda(eps) model to a sweep CSV");
  add_common(fit_cmd, o);
  fit_cmd->add_option("csv", o.input, "Sweep CSV")->required();
  fit_cmd->add_option("--form", o.form, "auto | symmetric | general")
      ->check(CLI::IsMember({"auto", "symmetric", "general"}))
      ->capture_default_str();

  auto* solve_cmd = app.add_subcommand("solve", "Find the energy eps for a target coupling lambda");
  add_common(solve_cmd, o);
  solve_cmd->add_option("--lambda", o.lambda, "Target coupling constant")->required();
  solve_cmd->add_option("--strategy", o.strategy, "accelerated | naive | interpolation")->capture_default_str();
  solve_cmd->add_option("--seeds", o.seeds, "Comma-separated seed energies for the accelerated strategy");
  solve_cmd->add_option("--bracket", o.bracket, "eps_lo,eps_hi for the bracketing strategies")->capture_default_str();
  solve_cmd->add_option("--tol", o.tol, "Relative tolerance on the achieved lambda")->capture_default_str();
  solve_cmd->add_option("--cap", o.cap, "Full-solve cap for the accelerated strategy")->capture_default_str();

  auto* oracle_cmd = app.add_subcommand("oracle", "Finite-difference ground state at a given lambda");
  add_common(oracle_cmd, o);
  oracle_cmd->add_option("--lambda", o.lambda, "Coupling constant")->required();

  auto* bench_cmd = app.add_subcommand("bench", "Compare inversion strategies over several targets");
  add_common(bench_cmd, o);
  bench_cmd->add_option("--targets", o.targets, "Comma-separated target lambdas")->capture_default_str();
  bench_cmd->add_option("--strategies", o.strategies, "Comma-separated strategies")->capture_default_str();
  bench_cmd->add_option("--seeds", o.seeds, "Comma-separated seed energies for the accelerated strategy");
  bench_cmd->add_option("--bracket", o.bracket, "eps_lo,eps_hi for the bracketing strategies")->capture_default_str();
  bench_cmd->add_option("--tol", o.tol, "Relative tolerance on the achieved lambda")->capture_default_str();
  bench_cmd->add_option("--cap", o.cap, "Full-solve cap for the accelerated strategy")->capture_default_str();

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(args);
    std::reverse(args.begin() + 1, args.end());
    std::vector<std::string> rest(args.begin() + 1, args.end());
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (sweep_cmd->parsed()) return cmd_sweep(o);
    if (fit_cmd->parsed()) return cmd_fit(o);
    if (solve_cmd->parsed()) return cmd_solve(o);
    if (oracle_cmd->parsed()) return cmd_oracle(o);
    if (bench_cmd->parsed()) return cmd_bench(o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "ppp/io.hpp"
#include "ppp/report.hpp"
#include "ppp/solver.hpp"
#include "ppp/stats.hpp"
#include "ppp/util.hpp"

namespace {

using ppp::Json;

struct CommonOpts {
  std::string out;
  std::uint64_t seed = 0;
  int threads = 1;
  double time_budget = 0.0;
  bool reproducible = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "write the JSON report (stats: the CSV series) here");
  cmd->add_option("--seed", c.seed, "RNG seed for all randomized steps");
  cmd->add_option("--threads", c.threads, "worker thread cap for factorization")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--time-budget", c.time_budget, "wall-clock budget in seconds (0 = unlimited)");
  cmd->add_flag("--reproducible", c.reproducible, "zero all timing fields in reports");
}

int emit(const ppp::RunReport& report, const std::string& out_path) {
  std::string text = report.to_json().dump(2);
  text.push_back('\n');
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 1;
    }
    f << text;
  }
  return 0;
}

Json flat_solver_config(const ppp::SolverConfig& cfg, const std::string& input,
                        const CommonOpts& common) {
  Json j;
  j["input"] = input;
  j["eigen_tol"] = cfg.eigen_tol;
  j["spectrum_k"] = cfg.spectrum_k;
  j["zero_cap_log2"] = cfg.zero_cap_log2;
  j["kernel_samples"] = cfg.kernel_samples;
  j["zero_tol"] = cfg.zero_tol;
  j["seed"] = cfg.seed;
  j["sweep"] = cfg.sweep;
  j["pump_enabled"] = cfg.pump_enabled;
  j["pump_gamma"] = cfg.pump.gamma;
  j["pump_k_max"] = cfg.pump.k_max;
  j["pump_epsilon"] = cfg.pump.epsilon;
  j["pump_bit_budget"] = cfg.pump.bit_budget;
  j["factor_time_limit_seconds"] = cfg.factor_budget.time_limit_seconds;
  j["oracle_cap"] = cfg.oracle_cap;
  j["time_budget_seconds"] = cfg.time_budget_seconds;
  j["threads"] = cfg.threads;
  j["reproducible"] = common.reproducible;
  return j;
}

std::string flat_text(const Json& config) {
  std::string out;
  for (auto it = config.begin(); it != config.end(); ++it) {
    out += it.key();
    out += '=';
    out += it.value().is_string() ? it.value().get<std::string>()
                                  : it.value().dump();
    out += '\n';
  }
  return out;
}

int run_solve(const std::string& input, ppp::SolverConfig cfg,
              const CommonOpts& common, bool print_config) {
  cfg.seed = common.seed;
  cfg.threads = common.threads;
  cfg.time_budget_seconds = common.time_budget;

  ppp::RunReport report;
  report.command = "solve";
  report.reproducible = common.reproducible;
  report.config = flat_solver_config(cfg, input, common);
  if (print_config) {
    std::cout << flat_text(report.config);
    return 0;
  }

  ppp::Instance inst;
  try {
    inst = ppp::read_instance_file(input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << input << ": " << e.what() << "\n";
    return 1;
  }

  ppp::Stopwatch watch;
  ppp::SolveReport solved = ppp::solve(inst, cfg);
  report.total_seconds = watch.seconds();
  report.warnings = solved.warnings;
  report.result = ppp::json_of(solved, common.reproducible);
  int rc = emit(report, common.out);
  if (rc != 0) return rc;
  switch (solved.status) {
    case ppp::SolveStatus::Solved: return 0;
    case ppp::SolveStatus::InfeasibleParity: return 2;
    case ppp::SolveStatus::NoCandidateVerified: return 3;
    case ppp::SolveStatus::BudgetExceeded: return 4;
  }
  return 3;
}

int run_pump(const std::string& input, ppp::PumpConfig cfg, bool have_gamma,
             bool have_epsilon, const std::string& csv_path,
             const CommonOpts& common) {
  cfg.threads = common.threads;
  if (common.time_budget > 0 && cfg.factor_budget.time_limit_seconds == 0) {
    cfg.factor_budget.time_limit_seconds = common.time_budget;
  }

  ppp::Instance inst;
  try {
    inst = ppp::read_instance_file(input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << input << ": " << e.what() << "\n";
    return 1;
  }

  ppp::RunReport report;
  report.command = "pump";
  report.reproducible = common.reproducible;
  ppp::Stopwatch watch;

  if (!have_gamma && have_epsilon) {
    cfg.gamma = ppp::select_gamma(cfg.epsilon, cfg.k_max);
  }
  if (!ppp::is_prime(ppp::BigInt(static_cast<unsigned long>(cfg.gamma)))) {
    report.warnings.push_back("nonprime-gamma");
  }

  Json jc;
  jc["input"] = input;
  jc["gamma"] = cfg.gamma;
  jc["gamma_auto_selected"] = !have_gamma && have_epsilon;
  jc["k_max"] = cfg.k_max;
  jc["epsilon"] = cfg.epsilon;
  jc["bit_budget"] = cfg.bit_budget;
  jc["growth_exponent_a"] = cfg.growth_exponent_a;
  jc["sigma0_gamma"] = ppp::divisor_count(cfg.gamma);
  jc["factor_time_limit_seconds"] = cfg.factor_budget.time_limit_seconds;
  jc["threads"] = cfg.threads;
  jc["seed"] = common.seed;
  jc["reproducible"] = common.reproducible;
  report.config = jc;

  ppp::ExponentMatrix matrix;
  try {
    matrix = ppp::build_matrix(inst, cfg.factor_budget, cfg.threads);
  } catch (const ppp::BudgetExceeded& e) {
    std::cerr << "error: initial factorization failed: " << e.what() << "\n";
    return 1;
  }
  if (!matrix.unit_rows().empty()) report.warnings.push_back("unit-entries");

  ppp::FactorCache cache;
  auto [pumped, trace] = ppp::pump_iterate(matrix, cfg, &cache);
  if (!trace.steps.empty()) {
    report.warnings.push_back("pump-exponent-generalization");
  }
  if (trace.stop == ppp::PumpStop::BitBudget) {
    report.warnings.push_back("trace-truncated-bit-budget");
  } else if (trace.stop == ppp::PumpStop::FactorBudget) {
    report.warnings.push_back("trace-truncated-factor-budget");
  }

  Json result;
  result["trace"] = ppp::json_of(trace, common.reproducible);
  result["final_q"] = pumped.cols;
  result["final_n"] = pumped.rows;
  result["final_max_prime_bits"] = pumped.max_prime_bits();
  Json primes = Json::array();
  for (const auto& p : pumped.primes) primes.push_back(p.get_str());
  result["final_primes"] = std::move(primes);
  Json entries = Json::array();
  for (const auto& e : pumped.entries) entries.push_back(e.get_str());
  result["final_entries"] = std::move(entries);
  auto [lo, hi] = ppp::ratio_bounds(cfg.gamma, trace.steps.size());
  result["cumulative_ratio_lower"] = lo;
  result["cumulative_ratio_upper"] = hi;
  // steps the n ~ q^a model expects before q catches up with n
  result["estimated_k_for_growth_a"] =
      matrix.cols >= 16 ? Json(ppp::estimate_K(cfg.growth_exponent_a, matrix.cols))
                        : Json(nullptr);
  report.result = std::move(result);
  report.total_seconds = watch.seconds();

  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    if (!f) {
      std::cerr << "error: cannot write " << csv_path << "\n";
      return 1;
    }
    f << ppp::pump_trace_csv(trace);
  }
  return emit(report, common.out);
}

int run_stats(std::uint64_t gamma, std::size_t q_max, std::size_t step,
              double factor_time, const CommonOpts& common) {
  if (step == 0) step = (q_max + 9) / 10;  // default: qmax/10 rounded up
  ppp::RunReport report;
  report.command = "stats";
  report.reproducible = common.reproducible;
  Json jc;
  jc["gamma"] = gamma;
  jc["q_max"] = q_max;
  jc["step"] = step;
  jc["factor_time_limit_seconds"] = factor_time;
  jc["threads"] = common.threads;
  jc["reproducible"] = common.reproducible;
  report.config = jc;

  ppp::Stopwatch watch;
  ppp::FactorBudget budget;
  budget.time_limit_seconds =
      factor_time == 0 && common.time_budget > 0 ? common.time_budget : factor_time;
  ppp::FactorCache cache;
  ppp::ScanResult scan = ppp::halberstam_scan(q_max, gamma, step, &cache, budget);
  report.total_seconds = watch.seconds();
  if (scan.truncated) report.warnings.push_back("scan-truncated-factor-budget");
  for (const auto& p : scan.points) {
    if (p.q < 3) {
      report.warnings.push_back("prediction-undefined-small-q");
      break;
    }
  }

  Json result;
  result["points"] = scan.points.size();
  result["truncated"] = scan.truncated;
  if (!scan.points.empty()) {
    const auto& last = scan.points.back();
    result["last_q"] = last.q;
    result["last_omega_big"] = last.omega_big;
    result["last_omega_little"] = last.omega_little;
    result["last_ratio_big"] = last.q >= 3 ? Json(last.ratio_big) : Json(nullptr);
    result["omega_gap_last"] =
        static_cast<double>(last.omega_little) / static_cast<double>(last.omega_big);
  }
  std::string csv = ppp::omega_series_csv(scan.points);
  if (common.out.empty()) {
    result["series"] = ppp::json_of(scan.points);
  } else {
    std::ofstream f(common.out);
    if (!f) {
      std::cerr << "error: cannot write " << common.out << "\n";
      return 1;
    }
    f << csv;
  }
  report.result = std::move(result);
  // stats: JSON summary always to stdout, --out holds the CSV
  std::cout << report.to_json().dump(2) << "\n";
  return 0;
}

int run_oracle(const std::string& input, std::size_t cap,
               const CommonOpts& common) {
  ppp::Instance inst;
  try {
    inst = ppp::read_instance_file(input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << input << ": " << e.what() << "\n";
    return 1;
  }
  if (inst.size() > cap) {
    std::cerr << "error: instance has " << inst.size()
              << " entries, oracle cap is " << cap << "\n";
    return 1;
  }
  ppp::RunReport report;
  report.command = "oracle";
  report.reproducible = common.reproducible;
  Json jc;
  jc["input"] = input;
  jc["cap"] = cap;
  jc["reproducible"] = common.reproducible;
  report.config = jc;

  ppp::Stopwatch watch;
  std::optional<ppp::BitVec> found;
  try {
    found = ppp::brute_force_oracle(inst, cap);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  report.total_seconds = watch.seconds();

  Json result;
  result["exhaustive"] = true;
  if (found) {
    ppp::ExponentMatrix m = ppp::build_matrix(inst);
    result["solution"] = ppp::json_of(ppp::make_candidate(inst, m, *found));
  } else {
    result["solution"] = Json(nullptr);
  }
  report.result = std::move(result);
  int rc = emit(report, common.out);
  if (rc != 0) return rc;
  return found ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"product partition toolkit: factor-matrix solver, prime pump, growth stats"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run the spectral pipeline on an instance file");
  std::string solve_input;
  CommonOpts solve_common;
  ppp::SolverConfig scfg;
  bool no_sweep = false;
  bool print_config = false;
  solve->add_option("input", solve_input, "instance file (one integer per line)")
      ->required();
  solve->add_option("--eigen-tol", scfg.eigen_tol, "relative zero threshold for eigenvalues")
      ->check(CLI::PositiveNumber);
  solve->add_option("--k", scfg.spectrum_k, "smallest eigenpairs to round")
      ->check(CLI::PositiveNumber);
  solve->add_option("--kernel-samples", scfg.kernel_samples,
                    "random unit vectors sampled in a degenerate near-kernel")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--candidate-cap-log2", scfg.zero_cap_log2,
                    "cap 2^c on zero-coordinate enumeration")
      ->check(CLI::Range(0, 10));
  solve->add_flag("--no-sweep", no_sweep, "skip the cardinality sweep");
  solve->add_flag("--pump", scfg.pump_enabled, "pump primes while q < n");
  solve->add_option("--gamma", scfg.pump.gamma, "pump exponent");
  solve->add_option("--kmax", scfg.pump.k_max, "max pump steps");
  solve->add_option("--epsilon", scfg.pump.epsilon, "target approximation slack");
  solve->add_option("--bit-budget", scfg.pump.bit_budget, "max bits of a pumped prime");
  solve->add_option("--factor-time", scfg.factor_budget.time_limit_seconds,
                    "per-factorization time limit in seconds (0 = unlimited)");
  solve->add_flag("--print-config", print_config,
                  "print the effective configuration as key=value text and exit");
  add_common(solve, solve_common);

  // pump
  auto* pump = app.add_subcommand("pump", "apply the prime pump and emit the trace");
  std::string pump_input, pump_csv;
  CommonOpts pump_common;
  ppp::PumpConfig pcfg;
  pump->add_option("input", pump_input, "instance file")->required();
  auto* gamma_opt = pump->add_option("--gamma", pcfg.gamma, "pump exponent (prime expected)");
  pump->add_option("--kmax", pcfg.k_max, "max pump steps")->check(CLI::PositiveNumber);
  auto* eps_opt = pump->add_option("--epsilon", pcfg.epsilon,
                                   "pick the smallest gamma certified within 1+epsilon");
  pump->add_option("--bit-budget", pcfg.bit_budget, "max bits of a pumped prime");
  pump->add_option("--growth-a", pcfg.growth_exponent_a,
                   "exponent a in the n ~ q^a model for the step estimate");
  pump->add_option("--factor-time", pcfg.factor_budget.time_limit_seconds,
                   "per-factorization time limit in seconds (0 = unlimited)");
  pump->add_option("--csv", pump_csv, "also write the trace as CSV here");
  add_common(pump, pump_common);

  // stats
  auto* stats = app.add_subcommand("stats", "omega growth scan over the first q primes");
  std::uint64_t st_gamma = 3;
  std::size_t st_qmax = 0, st_step = 0;
  double st_factor_time = 0.0;
  CommonOpts stats_common;
  stats->add_option("--gamma", st_gamma, "exponent gamma");
  stats->add_option("--qmax", st_qmax, "largest prime count")
      ->required()
      ->check(CLI::PositiveNumber);
  stats->add_option("--step", st_step, "checkpoint spacing (default qmax/10, rounded up)");
  stats->add_option("--factor-time", st_factor_time,
                    "per-factorization time limit in seconds (0 = unlimited)");
  add_common(stats, stats_common);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exhaustive ground-truth bipartition search");
  std::string oracle_input;
  std::size_t oracle_cap = 24;
  CommonOpts oracle_common;
  oracle->add_option("input", oracle_input, "instance file")->required();
  oracle->add_option("--cap", oracle_cap, "max instance size to enumerate");
  add_common(oracle, oracle_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) {
      scfg.sweep = !no_sweep;
      return run_solve(solve_input, scfg, solve_common, print_config);
    }
    if (pump->parsed()) {
      return run_pump(pump_input, pcfg, gamma_opt->count() > 0,
                      eps_opt->count() > 0, pump_csv, pump_common);
    }
    if (stats->parsed()) {
      if (st_gamma < 2) {
        std::cerr << "error: --gamma must be >= 2\n";
        return 1;
      }
      return run_stats(st_gamma, st_qmax, st_step, st_factor_time, stats_common);
    }
    if (oracle->parsed()) {
      return run_oracle(oracle_input, oracle_cap, oracle_common);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

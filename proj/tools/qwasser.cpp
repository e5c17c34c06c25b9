// qwasser: distances, divergences, verification suites and self-distance
// tables from the command line.
//
// Exit codes: 0 ok, 1 failed verification check, 2 parse error,
// 3 solver non-convergence.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qwasser/io.hpp"

namespace {

using namespace qwasser;
using io::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitNoConvergence = 3;

struct PairArgs {
  std::string rho, omega;
  std::string cost = "sym";
  std::string generators;
  bool from_stdin = false;
};

struct SolverArgs {
  double tolerance = SolverConfig{}.tolerance;
  int max_iterations = SolverConfig{}.max_iterations;
  bool no_fast_path = false;

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.tolerance = tolerance;
    cfg.max_iterations = max_iterations;
    cfg.self_distance_fast_path = !no_fast_path;
    return cfg;
  }
};

struct OutputArgs {
  bool json = false;
  bool csv = false;
  bool no_timing = false;
};

struct Problem {
  QubitState rho, omega;
  CostOperator cost;
  SolverConfig solver;
};

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

CostOperator cost_from_json(const json& j) {
  if (j.is_string()) return io::parse_cost(j.get<std::string>());
  if (j.is_object() && j.contains("generators")) return io::cost_from_generators_json(j["generators"], "cost.generators");
  throw io::ParseError("cost: expected \"sym\", \"z\" or {\"generators\": [...]}");
}

void apply_solver_json(const json& j, SolverConfig& cfg) {
  if (!j.is_object()) throw io::ParseError("solver: expected an object");
  if (j.contains("tolerance")) cfg.tolerance = io::json_number(j["tolerance"], "solver.tolerance");
  if (j.contains("max_iterations")) {
    if (!j["max_iterations"].is_number_integer()) throw io::ParseError("solver.max_iterations: expected an integer");
    cfg.max_iterations = j["max_iterations"].get<int>();
  }
  if (j.contains("self_distance_fast_path")) {
    if (!j["self_distance_fast_path"].is_boolean()) {
      throw io::ParseError("solver.self_distance_fast_path: expected a boolean");
    }
    cfg.self_distance_fast_path = j["self_distance_fast_path"].get<bool>();
  }
}

// Reads {"rho": ..., "omega": ..., "cost": ..., "solver": {...}} from stdin.
Problem problem_from_stdin(const SolverConfig& base) {
  const std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw io::ParseError(std::string("stdin: ") + e.what());
  }
  if (!j.is_object()) throw io::ParseError("stdin: expected a JSON object");
  for (const char* key : {"rho", "omega"}) {
    if (!j.contains(key)) throw io::ParseError(std::string("stdin: missing field '") + key + "'");
  }
  Problem p{io::state_from_json(j["rho"], "rho"), io::state_from_json(j["omega"], "omega"),
            j.contains("cost") ? cost_from_json(j["cost"]) : sym_cost(), base};
  if (j.contains("solver")) apply_solver_json(j["solver"], p.solver);
  return p;
}

Problem resolve(const PairArgs& pair, const SolverArgs& solver) {
  SolverConfig cfg = solver.config();
  Problem p = [&] {
    if (pair.from_stdin) return problem_from_stdin(cfg);
    if (pair.rho.empty() || pair.omega.empty()) throw io::ParseError("two states are required (or --stdin)");
    return Problem{io::parse_state(pair.rho, "rho"), io::parse_state(pair.omega, "omega"),
                   io::parse_cost(pair.cost, pair.generators), cfg};
  }();
  try {
    p.solver.validate();
  } catch (const ContractViolation& e) {
    throw io::ParseError(std::string("solver: ") + e.what());
  }
  return p;
}

json problem_config(const Problem& p) {
  return {{"cost", p.cost.label}, {"solver", io::to_json(p.solver)}};
}

void emit_report(const json& report) { std::cout << report.dump(2) << '\n'; }

class Stopwatch {
public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int cmd_distance(const PairArgs& pair, const SolverArgs& solver, const OutputArgs& out) {
  const Problem p = resolve(pair, solver);
  const Stopwatch clock;
  const TransportResult r = solve_min_coupling(p.rho, p.omega, p.cost, p.solver);
  const double ms = clock.elapsed_ms();
  const double d = std::sqrt(std::max(0.0, r.optimal_value));
  const int code = r.status == SolverStatus::max_iterations ? kExitNoConvergence : kExitOk;
  if (out.json) {
    json res = {{"rho", io::state_to_json(p.rho)},
                {"omega", io::state_to_json(p.omega)},
                {"distance", d},
                {"distance_sq", r.optimal_value},
                {"status", to_string(r.status)},
                {"duality_gap_or_residual", r.duality_gap_or_residual},
                {"iterations", r.iterations}};
    if (!out.no_timing) res["wall_time_ms"] = ms;
    emit_report(io::run_report("distance", problem_config(p), json::array({res})));
  } else {
    std::cout << "D = " << format_double(d) << '\n'
              << "D^2 = " << format_double(r.optimal_value) << '\n'
              << "status = " << to_string(r.status) << '\n';
  }
  if (code != kExitOk) std::cerr << "error: solver did not converge\n";
  return code;
}

int cmd_divergence(const PairArgs& pair, const SolverArgs& solver, const OutputArgs& out) {
  const Problem p = resolve(pair, solver);
  const Stopwatch clock;
  const DivergenceResult r = divergence_details(p.rho, p.omega, p.cost, p.solver);
  const double ms = clock.elapsed_ms();
  const int code = r.status == SolverStatus::max_iterations ? kExitNoConvergence : kExitOk;
  if (out.json) {
    json res = {{"rho", io::state_to_json(p.rho)},
                {"omega", io::state_to_json(p.omega)},
                {"divergence", r.value},
                {"radicand", r.radicand},
                {"distance_sq", r.distance_sq},
                {"self_distance_sq_rho", r.self_rho},
                {"self_distance_sq_omega", r.self_omega},
                {"status", to_string(r.status)}};
    if (!out.no_timing) res["wall_time_ms"] = ms;
    emit_report(io::run_report("divergence", problem_config(p), json::array({res})));
  } else {
    std::cout << "d = " << format_double(r.value) << '\n'
              << "radicand = " << format_double(r.radicand) << '\n'
              << "status = " << to_string(r.status) << '\n';
  }
  if (code != kExitOk) std::cerr << "error: solver did not converge\n";
  return code;
}

struct VerifyArgs {
  std::string suite;
  int samples = 500;
  std::uint64_t seed = 1;
  double tolerance = 0.0;
  int maps = 10;
};

int cmd_verify(const VerifyArgs& args, const SolverArgs& solver, const OutputArgs& out, bool tolerance_set) {
  suites::SuiteOptions opt;
  opt.samples = args.samples;
  opt.seed = args.seed;
  opt.maps = args.maps;
  opt.solver = solver.config();
  if (tolerance_set) opt.tolerance = args.tolerance;
  if (opt.samples < 1 || opt.maps < 1) throw io::ParseError("--samples and --maps must be positive");
  const Stopwatch clock;
  const auto report = suites::run_suite(args.suite, opt);
  const double ms = clock.elapsed_ms();
  if (!report) throw io::ParseError("unknown suite '" + args.suite + "'");
  if (out.json) {
    json config = {{"suite", args.suite},
                   {"samples", opt.samples},
                   {"seed", opt.seed},
                   {"maps", opt.maps},
                   {"tolerance", opt.tolerance ? json(*opt.tolerance) : json(nullptr)},
                   {"solver", io::to_json(opt.solver)}};
    json res = io::to_json(*report);
    if (!out.no_timing) res["wall_time_ms"] = ms;
    emit_report(io::run_report("verify", config, json::array({res})));
  } else {
    for (const auto& c : report->checks) {
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  max_deviation=" << format_double(c.max_deviation)
                << " tol=" << format_double(c.tolerance) << " samples=" << c.samples;
      if (!c.note.empty()) std::cout << "  (" << c.note << ')';
      std::cout << '\n';
    }
  }
  return report->passed() ? kExitOk : kExitVerifyFailed;
}

struct TableArgs {
  std::string cost = "sym";
  std::string generators;
  int grid = 10;
};

struct TableRow {
  double norm, b3, purification, sdp;
  std::optional<double> closed;
  SolverStatus status;
  double reference;
};

std::optional<double> closed_form(const std::string& cost, const BlochVector& b) {
  if (cost == "sym") return self_distance_sym_closed_form(b);
  if (cost == "z") return b.norm() == 0.0 ? std::optional<double>(0.0) : self_distance_z_closed_form(b);
  return std::nullopt;
}

// The printed constants that the closed forms above correct (see README).
double reference_form(const std::string& cost, const BlochVector& b) {
  const double r2 = b.dot(b);
  const double base = 1.0 - std::sqrt(std::max(0.0, 1.0 - r2));
  if (cost == "sym") return 2.0 * base;
  if (cost == "z") return r2 == 0.0 ? 0.0 : 0.5 * base * (1.0 - b.z * b.z / r2);
  return std::nan("");
}

int cmd_selfdist_table(const TableArgs& args, const SolverArgs& solver, const OutputArgs& out) {
  if (args.grid < 1) throw io::ParseError("--grid must be positive");
  const CostOperator cost = io::parse_cost(args.cost, args.generators);
  SolverConfig cfg = solver.config();
  cfg.self_distance_fast_path = false;
  cfg.validate();
  std::vector<TableRow> rows;
  bool converged = true;
  for (int i = 0; i <= args.grid; ++i) {
    const double r = static_cast<double>(i) / args.grid;
    for (int j = 0; j <= (i == 0 ? 0 : args.grid); ++j) {
      const double b3 = i == 0 ? 0.0 : r * (-1.0 + 2.0 * j / args.grid);
      const BlochVector b{std::sqrt(std::max(0.0, r * r - b3 * b3)), 0.0, b3};
      const QubitState rho = state_from_bloch(b);
      const auto sdp = solve_min_coupling(rho, rho, cost, cfg);
      converged = converged && sdp.status != SolverStatus::max_iterations;
      rows.push_back({r, b3, self_distance_sq(rho, cost), std::max(0.0, sdp.optimal_value), closed_form(args.cost, b),
                      sdp.status, reference_form(args.cost, b)});
    }
  }
  auto opt_str = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  auto diff = [](const std::optional<double>& a, double b) {
    return a ? std::optional<double>(std::abs(*a - b)) : std::nullopt;
  };
  if (out.json) {
    json res = json::array();
    for (const auto& row : rows) {
      res.push_back({{"bloch_norm", row.norm},
                     {"b3", row.b3},
                     {"selfdist_sq_purification", row.purification},
                     {"selfdist_sq_closed_form", row.closed ? json(*row.closed) : json(nullptr)},
                     {"selfdist_sq_sdp", row.sdp},
                     {"sdp_status", to_string(row.status)},
                     {"selfdist_sq_reference_form", std::isnan(row.reference) ? json(nullptr) : json(row.reference)}});
    }
    json config = {{"cost", cost.label}, {"grid", args.grid}, {"solver", io::to_json(cfg)}};
    emit_report(io::run_report("selfdist-table", config, res));
  } else {
    std::cout << "# schema_version=" << io::kSchemaVersion << '\n'
              << "bloch_norm,b3,selfdist_sq_purification,selfdist_sq_closed_form,selfdist_sq_sdp,"
                 "abs_diff_purification_closed_form,abs_diff_sdp_purification,abs_diff_sdp_closed_form,"
                 "sdp_status,selfdist_sq_reference_form\n";
    for (const auto& row : rows) {
      std::cout << format_double(row.norm) << ',' << format_double(row.b3) << ',' << format_double(row.purification)
                << ',' << opt_str(row.closed) << ',' << format_double(row.sdp) << ','
                << opt_str(diff(row.closed, row.purification)) << ',' << format_double(std::abs(row.sdp - row.purification))
                << ',' << opt_str(diff(row.closed, row.sdp)) << ',' << to_string(row.status) << ','
                << (std::isnan(row.reference) ? std::string() : format_double(row.reference)) << '\n';
    }
  }
  return converged ? kExitOk : kExitNoConvergence;
}

void add_solver_flags(CLI::App* cmd, SolverArgs& s) {
  cmd->add_option("--solver-tolerance", s.tolerance, "Duality gap target");
  cmd->add_option("--max-iterations", s.max_iterations, "Newton iteration cap");
  cmd->add_flag("--no-fast-path", s.no_fast_path, "Solve self-distances by SDP instead of purification");
}

void add_output_flags(CLI::App* cmd, OutputArgs& o, bool csv) {
  cmd->add_flag("--json", o.json, "Print the full JSON report");
  if (csv) cmd->add_flag("--csv", o.csv, "Print CSV (default)");
  cmd->add_flag("--no-timing", o.no_timing, "Omit wall times from JSON reports");
}

void add_pair_args(CLI::App* cmd, PairArgs& p) {
  cmd->add_option("--cost", p.cost, "sym, z or custom")->check(CLI::IsMember({"sym", "z", "custom"}));
  cmd->add_option("--generators", p.generators, "JSON list of 2x2 Hermitian matrices for --cost custom");
  cmd->add_flag("--stdin", p.from_stdin, "Read {rho, omega, cost, solver} as JSON from stdin");
  cmd->add_option("rho", p.rho, "State: named, bloch:x,y,z or JSON");
  cmd->add_option("omega", p.omega, "State: named, bloch:x,y,z or JSON");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Wasserstein distances on qubit states"};
  app.require_subcommand(1);

  PairArgs dist_pair, div_pair;
  SolverArgs dist_solver, div_solver, verify_solver, table_solver;
  OutputArgs dist_out, div_out, verify_out, table_out;
  VerifyArgs verify;
  TableArgs table;

  auto* distance = app.add_subcommand("distance", "Quantum Wasserstein distance D");
  add_pair_args(distance, dist_pair);
  add_solver_flags(distance, dist_solver);
  add_output_flags(distance, dist_out, false);

  auto* divergence = app.add_subcommand("divergence", "Quantum Wasserstein divergence d");
  add_pair_args(divergence, div_pair);
  add_solver_flags(divergence, div_solver);
  add_output_flags(divergence, div_out, false);

  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("suite", verify.suite, "Suite name")->required()->check(CLI::IsMember(suites::suite_names()));
  verify_cmd->add_option("--samples", verify.samples, "Sample count");
  verify_cmd->add_option("--seed", verify.seed, "Base seed");
  auto* tol_opt = verify_cmd->add_option("--tolerance", verify.tolerance, "Check tolerance (suite default if unset)");
  verify_cmd->add_option("--maps", verify.maps, "Maps per family");
  add_solver_flags(verify_cmd, verify_solver);
  add_output_flags(verify_cmd, verify_out, false);

  auto* table_cmd = app.add_subcommand("selfdist-table", "Self-distance grid over (|b|, b3)");
  table_cmd->add_option("--cost", table.cost, "sym, z or custom")->check(CLI::IsMember({"sym", "z", "custom"}));
  table_cmd->add_option("--generators", table.generators, "JSON generator list for --cost custom");
  table_cmd->add_option("--grid", table.grid, "Grid resolution");
  add_solver_flags(table_cmd, table_solver);
  add_output_flags(table_cmd, table_out, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (distance->parsed()) return cmd_distance(dist_pair, dist_solver, dist_out);
    if (divergence->parsed()) return cmd_divergence(div_pair, div_solver, div_out);
    if (verify_cmd->parsed()) return cmd_verify(verify, verify_solver, verify_out, tol_opt->count() > 0);
    if (table_cmd->parsed()) return cmd_selfdist_table(table, table_solver, table_out);
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const DomainError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ContractViolation& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const SolverAccuracyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  }
  return kExitParse;
}

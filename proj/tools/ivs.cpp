// ivs: run the elastica and divergence-example steppers, benchmark them
// against exact solutions, and sample the exact solutions.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ivs/cli.hpp"

namespace {

struct SchemeFlags {
  std::string scheme = "constrained-ivs";
  double mu = -1.0;
  double alpha = 4.0;
  double ell = 0.01;
  int steps = -1;  // -1: scheme default
  double s0 = -2.0;
  double tol = -1.0;
  double jac_reg = -1.0;
  std::string out = ".";
  std::vector<std::string> emit{"trajectory"};
  std::string config;
};

// Flat key=value file for one subcommand; keys already given as flags are
// left alone.
void apply_flat_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream is(path);
  if (!is) throw ivs::cli::IoError("cannot read config file " + path);
  for (const CLI::ConfigItem& item : CLI::ConfigINI().from_config(is)) {
    if (item.name.empty() || item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty()) throw ivs::ArgumentError("sections are not allowed in " + path);
    CLI::Option* opt = cmd->get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "config") throw ivs::ArgumentError("unknown config key '" + item.name + "'");
    if (opt->count() > 0) continue;
    opt->add_result(item.inputs);
    opt->run_callback();
  }
}

void add_scheme_flags(CLI::App* cmd, SchemeFlags& f) {
  cmd->add_option("--scheme", f.scheme, "free-ivs | constrained-ivs | invariant-naive | noninvariant-var | div-ivs | "
                                        "div-standard")
      ->capture_default_str();
  cmd->add_option("--mu", f.mu, "elastica mu")->capture_default_str();
  cmd->add_option("--alpha", f.alpha, "elastica alpha")->capture_default_str();
  cmd->add_option("--ell", f.ell, "edge length")->capture_default_str();
  cmd->add_option("--steps", f.steps, "advances (elastica) or lattice points (divergence)");
  cmd->add_option("--s0", f.s0, "initial arc parameter")->capture_default_str();
  cmd->add_option("--tol", f.tol, "Newton absolute tolerance");
  cmd->add_option("--jac-reg", f.jac_reg, "Jacobian diagonal regularization");
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--config", f.config, "key=value configuration file (flags take precedence)");
}

ivs::cli::RunSpec to_spec(const SchemeFlags& f) {
  ivs::cli::RunSpec spec;
  spec.scheme = ivs::parse_scheme(f.scheme);
  spec.params = ivs::default_params(spec.scheme);
  spec.params.mu = f.mu;
  spec.params.alpha = f.alpha;
  spec.params.ell = f.ell;
  spec.params.s0 = f.s0;
  if (f.steps >= 0) spec.params.steps = f.steps;
  if (f.tol >= 0.0) spec.params.solver.abs_tol = f.tol;
  if (f.jac_reg >= 0.0) spec.params.solver.jac_reg = f.jac_reg;
  spec.out = f.out;
  spec.emit = ivs::cli::parse_emit(f.emit);
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant variational schemes for the Euler elastica and u'' = 1/u^3"};
  app.set_config("--config", "", "configuration file with [simulate], [benchmark] or [exact] sections");
  app.require_subcommand(1);

  SchemeFlags sim_flags;
  auto* sim = app.add_subcommand("simulate", "run one scheme and write CSV output");
  add_scheme_flags(sim, sim_flags);
  sim->add_option("--emit", sim_flags.emit, "trajectory,drift,invariants")->delimiter(',')->capture_default_str();

  SchemeFlags bench_flags;
  std::vector<double> ladder;
  auto* bench = app.add_subcommand("benchmark", "convergence ladder against the exact solution, written to bench.csv");
  add_scheme_flags(bench, bench_flags);
  bench->add_option("--ladder", ladder, "edge lengths (elastica) or lattice-point counts (divergence)")
      ->delimiter(',');

  ivs::cli::ExactSpec exact;
  std::string exact_out = "exact.csv";
  auto* ex = app.add_subcommand("exact", "sample an exact solution");
  ex->add_option("--family", exact.family, "free | case1 | case2 | case3 | div")->capture_default_str();
  ex->add_option("--alpha", exact.alpha)->capture_default_str();
  ex->add_option("--mu", exact.mu)->capture_default_str();
  ex->add_option("-A,--A", exact.A, "divergence family: A")->capture_default_str();
  ex->add_option("-B,--B", exact.B, "divergence family: B")->capture_default_str();
  ex->add_option("--from", exact.lo, "first parameter value")->capture_default_str();
  ex->add_option("--to", exact.hi, "last parameter value")->capture_default_str();
  ex->add_option("--samples", exact.samples)->capture_default_str();
  ex->add_option("--out", exact_out, "output file")->capture_default_str();
  std::string exact_config;
  ex->add_option("--config", exact_config, "key=value configuration file (flags take precedence)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ivs::cli::kValidation;
  }

  try {
    apply_flat_config(sim, sim_flags.config);
    apply_flat_config(bench, bench_flags.config);
    apply_flat_config(ex, exact_config);
    if (*sim) return ivs::cli::simulate(to_spec(sim_flags), std::cout).exit_code;
    if (*bench) {
      const auto spec = to_spec(bench_flags);
      return ivs::cli::cmd_benchmark(spec, ladder.empty() ? ivs::cli::default_ladder(spec.scheme) : ladder,
                                     std::cout);
    }
    exact.out = exact_out;
    return ivs::cli::cmd_exact(exact);
  } catch (const ivs::cli::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ivs::cli::kIoError;
  } catch (const ivs::SolverFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ivs::cli::kSolverFailure;
  } catch (const ivs::Error& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return ivs::cli::kValidation;
  }
}

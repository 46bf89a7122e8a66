// secache: sweep / validate / solve runner for secrecy-constrained probabilistic caching.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "secache/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::string out;
  bool no_sim = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Monte Carlo seed (overrides sim.seed)");
  cmd->add_option("--trials", flags.trials, "Monte Carlo trials per point (enables simulation)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", flags.out, "Output path (overrides the config's output)");
  cmd->add_flag("--no-sim", flags.no_sim, "Skip Monte Carlo simulation");
}

secache::ExperimentSpec build_spec(const CommonFlags& flags) {
  secache::ExperimentSpec spec =
      flags.config.empty() ? secache::ExperimentSpec{} : secache::load_experiment_spec(flags.config);
  if (flags.trials || flags.seed) {
    if (!spec.sim) spec.sim = secache::SimConfig{};
    if (flags.trials) spec.sim->trials = *flags.trials;
    if (flags.seed) spec.sim->seed = *flags.seed;
  }
  if (flags.no_sim) spec.sim.reset();
  if (!flags.out.empty()) spec.output = flags.out;
  spec.check();
  return spec;
}

// Writes via `write` to spec.output, or stdout when no output is configured.
template <class Writer>
void emit(const std::string& path, Writer write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw secache::SpecError("cannot open output '" + path + "'");
  write(out);
  if (!out) throw secache::SpecError("failed writing output '" + path + "'");
}

int run_sweep_cmd(const CommonFlags& flags) {
  auto spec = build_spec(flags);
  const auto catalog = secache::resolve_catalog(spec);
  const auto rows = secache::run_sweep(spec);
  emit(spec.output, [&](std::ostream& os) { secache::write_sweep_csv(rows, os); });
  if (!spec.output.empty() && spec.output != "-") {
    emit(spec.output + ".json", [&](std::ostream& os) { os << secache::echo_spec_json(spec, catalog); });
  }
  return 0;
}

int run_validate_cmd(const CommonFlags& flags) {
  auto spec = build_spec(flags);
  if (!spec.sim) {
    std::cerr << "validate: simulation is required; drop --no-sim\n";
    return 2;
  }
  const auto report = secache::run_validate(spec);
  emit(spec.output, [&](std::ostream& os) { secache::write_validation_csv(report, os); });
  const bool ok = report.all_passed();
  std::cerr << "validate: " << (ok ? "all rows passed" : "FAILURES present") << '\n';
  return ok ? 0 : 1;
}

int run_solve_cmd(const CommonFlags& flags) {
  auto spec = build_spec(flags);
  const auto report = secache::solve_report_json(spec);
  emit(spec.output, [&](std::ostream& os) { os << report; });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy-constrained probabilistic caching: analytics, optimisation and Monte Carlo"};
  app.require_subcommand(1);

  CommonFlags sweep_flags;
  CommonFlags validate_flags;
  CommonFlags solve_flags;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep over beta, D, gamma_e or p_i; writes CSV");
  auto* validate = app.add_subcommand("validate", "Analytic vs Monte Carlo comparison report");
  auto* solve = app.add_subcommand("solve", "Optimal placement for one instance; writes JSON");
  add_common_flags(sweep, sweep_flags);
  add_common_flags(validate, validate_flags);
  add_common_flags(solve, solve_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return run_sweep_cmd(sweep_flags);
    if (*validate) {
      // validate always simulates; default to the acceptance trial count.
      if (!validate_flags.trials && validate_flags.config.empty()) validate_flags.trials = 100'000;
      return run_validate_cmd(validate_flags);
    }
    if (*solve) return run_solve_cmd(solve_flags);
  } catch (const secache::SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

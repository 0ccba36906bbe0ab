// Command-line front end: simulation runs and the diagnostic subcommands.
#include "lieobs/batch.hpp"
#include "lieobs/checks.hpp"
#include "lieobs/report.hpp"
#include "lieobs/scenario.hpp"
#include "lieobs/sim.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

using namespace lieobs;

namespace {

Scenario scenario_or_default(const std::string& path, const std::string& observer) {
  if (!path.empty()) return load_scenario(path);
  return default_scenario(parse_observer_kind(observer));
}

int cmd_run(const std::string& config, const std::string& out, bool plot) {
  const Scenario s = load_scenario(config);
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult r = run(s);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_csv(out, r.trace);
  if (plot) {
    const std::string svg = std::filesystem::path(out).replace_extension(".svg").string();
    write_svg(svg, r.trace);
    std::cout << "plot: " << svg << '\n';
  }

  const RunSummary& m = r.summary;
  std::printf("observer: %s (%s), %zu rows, %.2f s wall\n", to_string(s.observer).c_str(),
              to_string(s.integrator).c_str(), r.trace.size(), wall);
  std::printf("observability: %s (%s)\n", m.observable ? "pass" : "FAIL", m.observability.c_str());
  std::printf("final d(E) = %.3e, final |btilde| = %.3e\n", m.final_dE, m.final_btilde);
  if (m.fit) {
    std::printf("rate fit: rate %.4f 1/s, r^2 %.5f over %zu samples\n", m.fit->rate,
                m.fit->r_squared, m.fit->used);
  } else {
    std::printf("rate fit: unavailable (%s)\n", m.fit_error.c_str());
  }
  std::printf("Lyapunov increments above %.0e dt^2: %d (max increment %.3e dt^2)\n",
              kMonotonicityC, m.monotonicity_violations, m.max_increment_ratio);
  std::printf("L' sign violations: %d\n", m.lyap_dot_violations);
  std::printf("observed bounds: max |p| = %.3f m, max cond(Phi(X)) = %.3f\n", m.max_translation,
              m.max_condition);
  if (m.aborted) {
    std::fprintf(stderr, "run aborted: %s\n", m.abort_reason.c_str());
    return 2;
  }
  if (!m.observable) {
    std::printf("warning: outputs are not observable; convergence is not asserted\n");
    return 0;
  }
  if (s.noise_std == 0.0) {
    const bool ok = m.final_dE < kConvergenceTol && m.final_btilde < kConvergenceTol;
    std::printf("%s  convergence below %.0e\n", ok ? "PASS" : "FAIL", kConvergenceTol);
    return ok ? 0 : 3;
  }
  return 0;
}

int cmd_sweep(const Scenario& base, int seeds, bool serial) {
  const auto t0 = std::chrono::steady_clock::now();
  const SweepReport rep = serial ? sweep_serial(base, seeds) : sweep_parallel(base, seeds);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d seeds, %s, %.1f s wall\n", seeds,
              serial ? "serial" : ("OpenMP, " + std::to_string(parallel_threads()) + " threads").c_str(),
              wall);
  for (const auto& e : rep.entries) {
    std::printf("seed %3llu  %s  rate %.4f  r^2 %.5f  d(E) %.2e  |btilde| %.2e %s\n",
                static_cast<unsigned long long>(e.seed), e.converged ? "converged" : "NOT CONVERGED",
                e.rate, e.r_squared, e.final_dE, e.final_btilde, e.note.c_str());
  }
  return print_checks(std::cout, sweep_checks(rep)) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-like observers with input-bias estimation on SE(3)"};
  app.require_subcommand(1);

  std::string config, out, observer = "md", group = "se3";
  bool plot = false, serial = false;
  int samples = 1000, seeds = 20;
  std::uint64_t seed = 2024;

  auto* run_cmd = app.add_subcommand("run", "simulate a scenario and write the trace as CSV");
  run_cmd->add_option("--config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out, "output CSV")->required();
  run_cmd->add_flag("--plot", plot, "also write an SVG plot next to the CSV");

  auto* check_cmd = app.add_subcommand("check", "observability, gains and Hessian checks");
  auto* lemmas_cmd = app.add_subcommand("lemmas", "differential identities on random states");
  lemmas_cmd->add_option("--samples", samples, "random states")->check(CLI::PositiveNumber);
  auto* autonomy_cmd = app.add_subcommand("autonomy", "state dependence of the error dynamics");
  autonomy_cmd->add_option("--group", group, "se3 or r3")->check(CLI::IsMember({"se3", "r3"}));
  auto* lin_cmd = app.add_subcommand("linearize", "linearisation and excitation checks");
  auto* sweep_cmd = app.add_subcommand("sweep", "seeded batch over initial conditions");
  sweep_cmd->add_option("--seeds", seeds, "number of seeds")->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--serial", serial, "run the serial reference instead of OpenMP");
  auto* dump_cmd = app.add_subcommand("default-config", "print the default scenario as JSON");

  for (auto* c : {check_cmd, lemmas_cmd, autonomy_cmd, lin_cmd, sweep_cmd, dump_cmd}) {
    c->add_option("--config", config, "scenario JSON (default scenario if omitted)")
        ->check(CLI::ExistingFile);
    c->add_option("--observer", observer, "md or vasconcelos, for the default scenario")
        ->check(CLI::IsMember({"md", "vasconcelos"}));
  }
  for (auto* c : {lemmas_cmd, autonomy_cmd}) c->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(config, out, plot);
    const Scenario s = scenario_or_default(config, observer);
    if (*dump_cmd) {
      std::cout << scenario_to_json(s);
      return 0;
    }
    if (*check_cmd) return print_checks(std::cout, scenario_checks(s)) ? 0 : 1;
    if (*lemmas_cmd) return print_checks(std::cout, lemma_checks(s, samples, seed)) ? 0 : 1;
    if (*autonomy_cmd) {
      return print_checks(std::cout, autonomy_checks(parse_group(group), s, seed)) ? 0 : 1;
    }
    if (*lin_cmd) return print_checks(std::cout, linearize_checks(s)) ? 0 : 1;
    if (*sweep_cmd) return cmd_sweep(s, seeds, serial);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

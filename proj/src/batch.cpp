#include "lieobs/batch.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace lieobs {

namespace {

SweepEntry run_entry(const Scenario& base, std::uint64_t seed) {
  const Scenario s = perturbed_scenario(base, seed);
  const RunResult r = run(s);
  SweepEntry e;
  e.seed = seed;
  e.final_dE = r.summary.final_dE;
  e.final_btilde = r.summary.final_btilde;
  e.monotonicity_violations = r.summary.monotonicity_violations;
  e.converged = !r.summary.aborted && e.final_dE < kConvergenceTol &&
                e.final_btilde < kConvergenceTol;
  if (r.summary.fit) {
    e.rate = r.summary.fit->rate;
    e.r_squared = r.summary.fit->r_squared;
  } else {
    e.note = r.summary.fit_error;
  }
  if (r.summary.aborted) e.note = r.summary.abort_reason;
  return e;
}

void check_count(int count) {
  if (count < 1) throw std::invalid_argument("sweep: seed count must be >= 1");
}

SweepReport summarise(std::vector<SweepEntry> entries) {
  SweepReport report;
  report.entries = std::move(entries);
  report.min_rate = std::numeric_limits<double>::infinity();
  report.max_rate = 0.0;
  for (const auto& e : report.entries) {
    if (!e.converged) continue;
    ++report.converged;
    report.min_rate = std::min(report.min_rate, e.rate);
    report.max_rate = std::max(report.max_rate, e.rate);
  }
  if (report.converged == 0) report.min_rate = 0.0;
  return report;
}

}  // namespace

SweepReport sweep_serial(const Scenario& base, int count, std::uint64_t base_seed) {
  check_count(count);
  std::vector<SweepEntry> entries(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    entries[static_cast<std::size_t>(i)] = run_entry(base, base_seed + static_cast<std::uint64_t>(i));
  }
  return summarise(std::move(entries));
}

SweepReport sweep_parallel(const Scenario& base, int count, std::uint64_t base_seed) {
  check_count(count);
  std::vector<SweepEntry> entries(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < count; ++i) {
    entries[static_cast<std::size_t>(i)] = run_entry(base, base_seed + static_cast<std::uint64_t>(i));
  }
  return summarise(std::move(entries));
}

int parallel_threads() { return omp_get_max_threads(); }

}  // namespace lieobs

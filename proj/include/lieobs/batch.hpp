// Seeded scenario batches (the sweep over initial conditions), with a serial
// reference and an OpenMP version that must produce identical results.
#pragma once

#include "lieobs/scenario.hpp"
#include "lieobs/sim.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lieobs {

struct SweepEntry {
  std::uint64_t seed = 0;
  bool converged = false;
  double rate = 0.0;
  double r_squared = 0.0;
  double final_dE = 0.0;
  double final_btilde = 0.0;
  int monotonicity_violations = 0;
  std::string note;

  bool operator==(const SweepEntry&) const = default;
};

struct SweepReport {
  std::vector<SweepEntry> entries;
  double min_rate = 0.0;
  double max_rate = 0.0;
  int converged = 0;

  /// max rate / min rate over the converged entries.
  double spread() const { return min_rate > 0.0 ? max_rate / min_rate : 0.0; }
};

/// Final errors below this threshold count as converged.
inline constexpr double kConvergenceTol = 1e-6;

/// Seeds base_seed, ..., base_seed + count - 1 through perturbed_scenario.
SweepReport sweep_serial(const Scenario& base, int count, std::uint64_t base_seed = 1);
SweepReport sweep_parallel(const Scenario& base, int count, std::uint64_t base_seed = 1);

/// Number of OpenMP threads available to sweep_parallel.
int parallel_threads();

}  // namespace lieobs

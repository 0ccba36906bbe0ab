// Pass/fail diagnostics behind the command-line subcommands. Each check
// reports the measured quantity next to the limit it is held to.
#pragma once

#include "lieobs/analysis.hpp"
#include "lieobs/batch.hpp"
#include "lieobs/scenario.hpp"

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace lieobs {

struct CheckLine {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double limit = 0.0;
  std::string detail;
};

/// Rotation angle uniform in [0, max_angle] about a uniform axis and a
/// Gaussian translation with standard deviation `translation_std`.
Pose random_pose(std::mt19937_64& rng, double max_angle, double translation_std);

/// Observability, gain validity, Hessian definiteness and kernel agreement.
std::vector<CheckLine> scenario_checks(const Scenario& s);

/// Differential identities over random states: the error-coordinate
/// identity, right-shift invariance, analytic vs finite-difference
/// differential, and closed-form vs generic observer assembly.
std::vector<CheckLine> lemma_checks(const Scenario& s, int samples, std::uint64_t seed);

/// Dependence of the closed-loop error dynamics on the true state.
std::vector<CheckLine> autonomy_checks(GroupKind group, const Scenario& s, std::uint64_t seed);

/// Linearisation and persistency-of-excitation checks along the scenario's
/// truth trajectory (one window of `window` seconds every 5 s).
std::vector<CheckLine> linearize_checks(const Scenario& s, double window = 1.0);

/// All entries converged, r^2 above 0.98 and rate spread within a factor of 3.
std::vector<CheckLine> sweep_checks(const SweepReport& report);

/// Prints one line per check and returns true when all passed.
bool print_checks(std::ostream& out, const std::vector<CheckLine>& lines);

}  // namespace lieobs

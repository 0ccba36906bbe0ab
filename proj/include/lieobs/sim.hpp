// Truth generation, sensor simulation and observer runs.
#pragma once

#include "lieobs/analysis.hpp"
#include "lieobs/observer.hpp"
#include "lieobs/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lieobs {

/// Truth sampled every dt/2, so that the midpoint stages of rk4-mk land on
/// a sample. sample(k) is the state at t = k dt / 2.
struct Truth {
  double sample_dt = 0.0;
  std::vector<Pose> poses;
  std::vector<Vec6> velocity;
};

/// Integrates X' = X [u(t)] with rk4-mk using `substeps` steps per sample
/// (default 5, i.e. dt/10 per step).
Truth generate_truth(const Scenario& s, int substeps = 5);

struct SensorSample {
  Vec6 u_y;
  Measurement y;  // landmark readings, or z outputs in z_mode
};

/// u_y = u + b (+ noise), outputs from the truth pose; one sample per truth
/// sample. Noise is Gaussian with standard deviation noise_std on every
/// velocity and output component, drawn from the scenario seed.
std::vector<SensorSample> simulate_sensors(const Truth& truth, const Scenario& s);

/// Observer vector field of the scenario's observer family on the sensor
/// stream; t must lie on the dt/2 grid.
RhsEvaluator scenario_rhs(const Scenario& s, const InvariantCost& cost,
                          const std::vector<SensorSample>& sensors, double sample_dt);

struct TraceRow {
  double t;
  double dE;
  double btilde_w;
  double btilde_v;
  double lyap;
  double lyap_dot;
  double phi;
  double condX;
};

/// Lyapunov increments above kMonotonicityC * dt^2 count as violations.
inline constexpr double kMonotonicityC = 1e-3;

struct RunSummary {
  std::optional<RateFit> fit;
  std::string fit_error;
  double final_dE = 0.0;
  double final_btilde = 0.0;
  int monotonicity_violations = 0;
  double max_increment_ratio = 0.0;  // max over steps of (L_{k+1} - L_k) / dt^2
  int lyap_dot_violations = 0;       // L' > 1e-12 (1 + |row|^2)
  bool observable = true;
  std::string observability;
  double max_translation = 0.0;
  double max_condition = 0.0;
  bool aborted = false;
  std::string abort_reason;
};

struct RunResult {
  std::vector<TraceRow> trace;
  RunSummary summary;
  ObserverState final_state;
};

/// Runs the scenario's observer on a freshly generated truth. A non-finite
/// state aborts the run; the trace then ends at the last good step.
RunResult run(const Scenario& s);
RunResult run(const Scenario& s, const Truth& truth, const std::vector<SensorSample>& sensors);

/// l(x~) for every row.
std::vector<double> compound_distances(const std::vector<TraceRow>& trace);

struct OrderStudy {
  std::vector<double> dts;
  std::vector<double> errors;
  double order = 0.0;  // least-squares slope of log error against log dt
};

/// Runs the observer over `horizon` seconds for each dt and compares the
/// final state with an rk4-mk run at min(dts)/100. Errors are
/// |log(Xhat Xhat_ref^{-1})| + |bhat - bhat_ref|. Every dt must be an integer
/// multiple of the reference step.
OrderStudy integrator_order_study(const Scenario& s, Integrator method,
                                  const std::vector<double>& dts, double horizon);

}  // namespace lieobs

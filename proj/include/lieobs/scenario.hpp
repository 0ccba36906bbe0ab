// Simulation scenario: landmarks, bias, velocity profile, gains, observer
// choice and initial conditions, with a JSON representation.
#pragma once

#include "lieobs/cost.hpp"
#include "lieobs/lie.hpp"
#include "lieobs/observer.hpp"
#include "lieobs/outputs.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace lieobs {

/// Per-axis c + a sin(2 pi f t + phase).
struct SinusoidProfile {
  Vec3 offset = Vec3::Zero();
  Vec3 amplitude = Vec3::Zero();
  Vec3 frequency = Vec3::Zero();  // Hz
  Vec3 phase = Vec3::Zero();      // rad

  Vec3 operator()(double t) const;
};

struct VelocityProfile {
  SinusoidProfile omega;  // body angular velocity, rad/s
  SinusoidProfile v;      // body linear velocity, m/s

  Vec6 operator()(double t) const { return make_vec6(omega(t), v(t)); }
};

enum class ObserverKind { kMd, kVasconcelos };

ObserverKind parse_observer_kind(const std::string& name);
std::string to_string(ObserverKind kind);

struct ScenarioGains {
  std::vector<double> k;  // cost weight per output
  double k_omega = 2.0;
  double k_v = 2.0;
  double gamma_omega = 1.0;
  double gamma_v = 1.0;
};

struct Scenario {
  std::vector<Vec3> landmarks;
  Vec6 bias = Vec6::Zero();
  VelocityProfile velocity;
  ScenarioGains gains;
  ObserverKind observer = ObserverKind::kMd;
  bool z_mode = false;
  Eigen::MatrixXd a_matrix;  // empty means identity when z_mode is set
  double duration = 60.0;
  double dt = 1e-3;
  double noise_std = 0.0;
  std::uint64_t seed = 1;
  Pose x0;
  Pose xhat0;
  Vec6 bhat0 = Vec6::Zero();
  Integrator integrator = Integrator::kRk4MuntheKaas;

  /// Throws std::invalid_argument on dt <= 0, duration < dt, an observer
  /// inconsistent with z_mode, a weight list of the wrong length, or
  /// non-positive gains.
  void validate() const;

  std::size_t steps() const;
  Gains observer_gains() const;
  /// Landmark cost, or the direction cost over z references in z_mode.
  InvariantCost cost() const;
  /// Landmark output set (always the raw landmarks).
  OutputSet landmark_outputs() const;
  /// The coefficient matrix used in z_mode.
  Eigen::MatrixXd coefficients() const;
};

/// Four landmarks at (0,0,0), (2,0,0), (0,2,0), (0,0,2); sinusoidal
/// velocities; estimate offset by 20 degrees and 0.5 m; 60 s at dt = 1e-3.
Scenario default_scenario(ObserverKind observer = ObserverKind::kMd);

/// Throws std::invalid_argument (with the offending key) on malformed input.
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& s);

/// Seeded perturbation of the initial conditions (t0 shift of the velocity
/// phases, X0, Xhat0, bhat0) used by the sweep; estimate offsets keep the
/// default magnitudes.
Scenario perturbed_scenario(const Scenario& base, std::uint64_t seed);

}  // namespace lieobs

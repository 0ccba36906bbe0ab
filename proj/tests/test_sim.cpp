#include "lieobs/report.hpp"
#include "lieobs/scenario.hpp"
#include "lieobs/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lieobs {
namespace {

Scenario short_scenario(ObserverKind kind = ObserverKind::kMd, double duration = 2.0) {
  Scenario s = default_scenario(kind);
  s.duration = duration;
  return s;
}

TEST(Truth, StaticWithoutVelocity) {
  Scenario s = short_scenario();
  s.velocity = VelocityProfile{};
  const Truth truth = generate_truth(s);
  ASSERT_EQ(truth.poses.size(), 2 * s.steps() + 1);
  EXPECT_LT((truth.poses.back().matrix() - s.x0.matrix()).norm(), 1e-15);
}

TEST(Truth, ConstantRotationAboutVertical) {
  Scenario s = short_scenario();
  s.x0 = Pose();
  s.velocity = VelocityProfile{};
  s.velocity.omega.offset = Vec3(0, 0, 0.5);
  s.velocity.v.offset = Vec3(1.0, 0, 0);
  const Truth truth = generate_truth(s);
  // Body-fixed forward speed 1 while turning at 0.5 rad/s: a circle of radius 2.
  const double t = s.duration;
  const Vec3 p(2.0 * std::sin(0.5 * t), 2.0 * (1.0 - std::cos(0.5 * t)), 0.0);
  EXPECT_LT((truth.poses.back().translation() - p).norm(), 1e-10);
  EXPECT_LT((truth.poses.back().rotation() - exp_so3(Vec3(0, 0, 0.5 * t))).norm(), 1e-12);
}

TEST(Sensors, CleanReadings) {
  Scenario s = short_scenario();
  s.bias = Vec6::Zero();
  const Truth truth = generate_truth(s);
  const auto sensors = simulate_sensors(truth, s);
  ASSERT_EQ(sensors.size(), truth.poses.size());
  for (std::size_t k = 0; k < sensors.size(); k += 97) {
    EXPECT_EQ(sensors[k].u_y, truth.velocity[k]);
    for (std::size_t i = 0; i < s.landmarks.size(); ++i) {
      const Vec3 expected = truth.poses[k].rotation().transpose() *
                            (s.landmarks[i] - truth.poses[k].translation());
      EXPECT_LT((sensors[k].y.values[i] - expected).norm(), 1e-14);
    }
  }
}

TEST(Sensors, ConstantBiasOffset) {
  const Scenario s = short_scenario();
  const Truth truth = generate_truth(s);
  const auto sensors = simulate_sensors(truth, s);
  for (std::size_t k = 0; k < sensors.size(); k += 101) {
    EXPECT_LT((sensors[k].u_y - truth.velocity[k] - s.bias).norm(), 1e-15);
  }
}

TEST(Sensors, ZModeOutputs) {
  const Scenario s = short_scenario(ObserverKind::kVasconcelos);
  const Truth truth = generate_truth(s);
  const auto sensors = simulate_sensors(truth, s);
  const OutputSet z = s.cost().outputs();
  for (std::size_t k = 0; k < sensors.size(); k += 113) {
    const Measurement expected = measure(truth.poses[k], z);
    for (std::size_t j = 0; j < expected.values.size(); ++j) {
      EXPECT_LT((sensors[k].y.values[j] - expected.values[j]).norm(), 1e-13);
    }
  }
}

TEST(Sensors, NoiseIsSeeded) {
  Scenario s = short_scenario();
  s.noise_std = 0.01;
  const Truth truth = generate_truth(s);
  const auto a = simulate_sensors(truth, s);
  const auto b = simulate_sensors(truth, s);
  EXPECT_EQ(a[10].u_y, b[10].u_y);
  s.seed = 2;
  const auto c = simulate_sensors(truth, s);
  EXPECT_NE(a[10].u_y, c[10].u_y);
}

TEST(Run, StaysOnTruthWhenStartedThere) {
  for (auto kind : {ObserverKind::kMd, ObserverKind::kVasconcelos}) {
    Scenario s = short_scenario(kind, 10.0);
    s.xhat0 = s.x0;
    s.bhat0 = s.bias;
    const RunResult r = run(s);
    EXPECT_FALSE(r.summary.aborted);
    EXPECT_LT(r.summary.final_dE, 1e-8);
    EXPECT_LT(r.summary.final_btilde, 1e-8);
  }
}

TEST(Run, TraceShape) {
  const Scenario s = short_scenario();
  const RunResult r = run(s);
  ASSERT_EQ(r.trace.size(), s.steps() + 1);
  EXPECT_EQ(r.trace.front().t, 0.0);
  EXPECT_NEAR(r.trace.back().t, s.duration, 1e-12);
  for (const auto& row : r.trace) {
    EXPECT_GE(row.lyap, 0.0);
    EXPECT_LE(row.lyap_dot, 1e-12);
    EXPECT_GE(row.condX, 1.0);
  }
  EXPECT_EQ(r.summary.monotonicity_violations, 0);
  EXPECT_TRUE(r.summary.observable);
}

TEST(Run, FlagsCollinearLandmarks) {
  Scenario s = short_scenario();
  s.landmarks = {Vec3(0, 0, 0), Vec3(1, 1, 1), Vec3(2, 2, 2), Vec3(3, 3, 3)};
  const RunResult r = run(s);
  EXPECT_FALSE(r.summary.observable);
  EXPECT_FALSE(r.summary.observability.empty());
}

TEST(Run, AbortsOnNonFiniteState) {
  Scenario s = short_scenario();
  s.duration = 0.1;
  Truth truth = generate_truth(s);
  auto sensors = simulate_sensors(truth, s);
  sensors[40].u_y(0) = std::numeric_limits<double>::infinity();
  const RunResult r = run(s, truth, sensors);
  EXPECT_TRUE(r.summary.aborted);
  EXPECT_FALSE(r.summary.abort_reason.empty());
  EXPECT_LT(r.trace.size(), s.steps() + 1);
  for (const auto& row : r.trace) EXPECT_TRUE(std::isfinite(row.lyap));
}

TEST(Run, RejectsShortStreams) {
  const Scenario s = short_scenario();
  Truth truth = generate_truth(s);
  auto sensors = simulate_sensors(truth, s);
  sensors.resize(10);
  EXPECT_THROW(run(s, truth, sensors), std::invalid_argument);
}

TEST(Csv, DeterministicAndFormatted) {
  const Scenario s = short_scenario();
  std::ostringstream a, b;
  write_csv(a, run(s).trace);
  write_csv(b, run(s).trace);
  EXPECT_EQ(a.str(), b.str());

  const std::string text = a.str();
  EXPECT_EQ(text.find('\r'), std::string::npos);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,dE,btilde_w,btilde_v,lyap,lyap_dot,phi,condX");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string f;
    int n = 0;
    while (std::getline(fields, f, ',')) {
      ++n;
      EXPECT_NO_THROW((void)std::stod(f));
    }
    EXPECT_EQ(n, 8);
  }
  EXPECT_EQ(rows, s.steps() + 1);
}

TEST(Csv, RoundTripsDoubles) {
  TraceRow r{0.1, 1.0 / 3.0, std::numbers::pi, 1e-300, 2.0, -1e-17, 0.0, 1.0};
  std::ostringstream out;
  write_csv(out, {r});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::istringstream fields(line);
  std::vector<double> v;
  std::string f;
  while (std::getline(fields, f, ',')) v.push_back(std::stod(f));
  ASSERT_EQ(v.size(), 8u);
  EXPECT_EQ(v[1], r.dE);
  EXPECT_EQ(v[2], r.btilde_w);
  EXPECT_EQ(v[3], r.btilde_v);
  EXPECT_EQ(v[5], r.lyap_dot);
}

TEST(Svg, RendersPanels) {
  const std::string svg = render_svg(run(short_scenario()).trace);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("polyline"), std::string::npos);
}

TEST(Config, JsonRoundTrip) {
  for (auto kind : {ObserverKind::kMd, ObserverKind::kVasconcelos}) {
    Scenario s = default_scenario(kind);
    s.noise_std = 0.003;
    s.seed = 77;
    s.integrator = Integrator::kLieEuler;
    const Scenario back = scenario_from_json(scenario_to_json(s));
    EXPECT_EQ(back.landmarks, s.landmarks);
    EXPECT_EQ(back.bias, s.bias);
    EXPECT_EQ(back.seed, 77u);
    EXPECT_EQ(back.integrator, Integrator::kLieEuler);
    EXPECT_LT((back.xhat0.matrix() - s.xhat0.matrix()).norm(), 1e-15);
  }
}

TEST(Config, PartialConfigUsesDefaults) {
  const Scenario s = scenario_from_json(R"({"duration": 5.0, "gains": {"k": 2.0}})");
  EXPECT_EQ(s.duration, 5.0);
  EXPECT_EQ(s.gains.k, std::vector<double>(4, 2.0));
  EXPECT_EQ(s.landmarks.size(), 4u);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(scenario_from_json("{"), std::invalid_argument);
  EXPECT_THROW(scenario_from_json(R"({"durration": 5})"), std::invalid_argument);
  EXPECT_THROW(scenario_from_json(R"({"dt": -1})"), std::invalid_argument);
  EXPECT_THROW(scenario_from_json(R"({"observer": "ekf"})"), std::invalid_argument);
  EXPECT_THROW(scenario_from_json(R"({"landmarks": [[1, 2]]})"), std::invalid_argument);
  EXPECT_THROW(scenario_from_json(R"({"gains": {"k": [1, 1]}})"), std::invalid_argument);
  EXPECT_THROW(scenario_from_json(R"({"gains": {"k_v": 0}})"), std::invalid_argument);
  EXPECT_THROW(scenario_from_json(R"({"observer": "vasconcelos", "z_mode": false})"),
               std::invalid_argument);
  EXPECT_THROW(scenario_from_json(R"({"z_mode": true, "a_matrix": [[1, 0], [0, 1]]})"),
               std::invalid_argument);
  EXPECT_THROW(load_scenario("/nonexistent/config.json"), std::invalid_argument);
}

TEST(OrderStudy, RejectsIncompatibleSteps) {
  const Scenario s = short_scenario();
  EXPECT_THROW(integrator_order_study(s, Integrator::kLieEuler, {0.01}, 0.1),
               std::invalid_argument);
  EXPECT_THROW(integrator_order_study(s, Integrator::kLieEuler, {0.03, 0.01}, 0.1),
               std::invalid_argument);
}

}  // namespace
}  // namespace lieobs

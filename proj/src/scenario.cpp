#include "lieobs/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lieobs {

using nlohmann::json;

Vec3 SinusoidProfile::operator()(double t) const {
  Vec3 out;
  for (int k = 0; k < 3; ++k) {
    out(k) = offset(k) + amplitude(k) * std::sin(2.0 * std::numbers::pi * frequency(k) * t +
                                                 phase(k));
  }
  return out;
}

ObserverKind parse_observer_kind(const std::string& name) {
  if (name == "md") return ObserverKind::kMd;
  if (name == "vasconcelos") return ObserverKind::kVasconcelos;
  throw std::invalid_argument("unknown observer '" + name + "' (expected md or vasconcelos)");
}

std::string to_string(ObserverKind kind) {
  return kind == ObserverKind::kMd ? "md" : "vasconcelos";
}

void Scenario::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("scenario: dt must be positive");
  if (!(duration >= dt)) throw std::invalid_argument("scenario: duration must be at least dt");
  if (landmarks.empty()) throw std::invalid_argument("scenario: no landmarks");
  if (gains.k.size() != landmarks.size()) {
    throw std::invalid_argument("scenario: gains.k must have one weight per landmark");
  }
  if (!(gains.k_omega > 0.0 && gains.k_v > 0.0)) {
    throw std::invalid_argument("scenario: k_omega and k_v must be positive");
  }
  if (!(gains.gamma_omega > 0.0 && gains.gamma_v > 0.0)) {
    throw std::invalid_argument("scenario: gamma_omega and gamma_v must be positive");
  }
  if (observer == ObserverKind::kVasconcelos && !z_mode) {
    throw std::invalid_argument("scenario: the vasconcelos observer needs z_mode");
  }
  if (observer == ObserverKind::kMd && z_mode) {
    throw std::invalid_argument("scenario: the md observer needs landmark outputs (z_mode off)");
  }
  if (!(noise_std >= 0.0)) throw std::invalid_argument("scenario: noise_std must be >= 0");
  if (z_mode) coefficients();
}

std::size_t Scenario::steps() const {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

Gains Scenario::observer_gains() const {
  Gains g;
  g.K = observer == ObserverKind::kMd ? GainK::diagonal(gains.k_omega, gains.k_v)
                                      : GainK::vasconcelos(gains.k_omega, gains.k_v);
  g.gamma = {gains.gamma_omega, gains.gamma_v};
  return g;
}

OutputSet Scenario::landmark_outputs() const { return make_landmark_set(landmarks, gains.k); }

Eigen::MatrixXd Scenario::coefficients() const {
  const auto m = static_cast<Eigen::Index>(landmarks.size()) - 1;
  if (m < 1) throw std::invalid_argument("scenario: z_mode needs two or more landmarks");
  if (a_matrix.size() == 0) return Eigen::MatrixXd::Identity(m, m);
  if (a_matrix.rows() != m || a_matrix.cols() != m) {
    throw std::invalid_argument("scenario: a_matrix must be (n-1)x(n-1)");
  }
  return a_matrix;
}

InvariantCost Scenario::cost() const {
  if (!z_mode) return InvariantCost(landmark_outputs());
  return InvariantCost(make_direction_set(landmarks, coefficients(), gains.k).outputs);
}

namespace {

Pose offset_pose(const Pose& base, const Vec3& rot_axis, double angle, const Vec3& dir,
                 double dist) {
  return Pose(exp_so3(angle * rot_axis.normalized()) * base.rotation(),
              base.translation() + dist * dir.normalized());
}

}  // namespace

Scenario default_scenario(ObserverKind observer) {
  Scenario s;
  s.landmarks = {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0), Vec3(0, 0, 2)};
  s.bias = make_vec6(Vec3(0.02, -0.01, 0.03), Vec3(0.1, -0.05, 0.07));
  s.velocity.omega.amplitude = Vec3(0.3, 0.4, 0.5);
  s.velocity.omega.frequency = Vec3(0.1, 0.2, 0.15);
  s.velocity.omega.phase = Vec3(0.0, 1.0, 2.0);
  s.velocity.v.amplitude = Vec3(0.5, 0.4, 0.3);
  s.velocity.v.frequency = Vec3(0.5, 0.4, 0.3);
  s.velocity.v.phase = Vec3(0.5, 0.0, 1.5);
  s.gains.k.assign(s.landmarks.size(), 1.0);
  s.observer = observer;
  s.z_mode = observer == ObserverKind::kVasconcelos;
  s.x0 = Pose(exp_so3(Vec3(0.1, -0.2, 0.3)), Vec3::Zero());
  s.xhat0 = offset_pose(s.x0, Vec3(1, 2, 3), 20.0 * std::numbers::pi / 180.0, Vec3(1, -1, 1), 0.5);
  s.bhat0 = Vec6::Zero();
  return s;
}

Scenario perturbed_scenario(const Scenario& base, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  auto gaussian3 = [&] { return Vec3(normal(rng), normal(rng), normal(rng)); };
  auto uniform3 = [&] { return Vec3(uniform(rng), uniform(rng), uniform(rng)); };

  Scenario s = base;
  s.seed = seed;
  // Start time t0 in [0, 20) s expressed as a phase shift of the profile.
  const double t0 = 10.0 * (uniform(rng) + 1.0);
  for (SinusoidProfile* p : {&s.velocity.omega, &s.velocity.v}) {
    p->phase += 2.0 * std::numbers::pi * t0 * p->frequency;
  }
  s.x0 = Pose(exp_so3(0.5 * uniform3()), 0.5 * uniform3());
  const double angle = 20.0 * std::numbers::pi / 180.0;
  s.xhat0 = offset_pose(s.x0, gaussian3(), angle, gaussian3(), 0.5);
  s.bhat0 = make_vec6(0.02 * gaussian3(), 0.05 * gaussian3());
  return s;
}

// JSON --------------------------------------------------------------------

namespace {

Vec3 vec3_from(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("config: '" + key + "' must be an array of 3 numbers");
  }
  Vec3 v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw std::invalid_argument("config: '" + key + "' has a non-number");
    v(k) = j[k].get<double>();
  }
  return v;
}

json to_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument("config: '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
    }
  }
}

double number_from(const json& j, const std::string& key) {
  if (!j.is_number()) throw std::invalid_argument("config: '" + key + "' must be a number");
  return j.get<double>();
}

Vec6 algebra_from(const json& j, const std::string& key) {
  check_keys(j, {"omega", "v"}, key);
  Vec6 out = Vec6::Zero();
  if (j.contains("omega")) out.head<3>() = vec3_from(j["omega"], key + ".omega");
  if (j.contains("v")) out.tail<3>() = vec3_from(j["v"], key + ".v");
  return out;
}

json to_json(const Vec6& v) { return {{"omega", to_json(Vec3(v.head<3>()))}, {"v", to_json(Vec3(v.tail<3>()))}}; }

Pose pose_from(const json& j, const std::string& key) {
  check_keys(j, {"rotation_vector", "translation"}, key);
  Vec3 rv = Vec3::Zero(), p = Vec3::Zero();
  if (j.contains("rotation_vector")) rv = vec3_from(j["rotation_vector"], key + ".rotation_vector");
  if (j.contains("translation")) p = vec3_from(j["translation"], key + ".translation");
  return Pose(exp_so3(rv), p);
}

json to_json(const Pose& X) {
  return {{"rotation_vector", to_json(log_so3(X.rotation()))},
          {"translation", to_json(X.translation())}};
}

SinusoidProfile sinusoid_from(const json& j, const std::string& key, SinusoidProfile base) {
  check_keys(j, {"offset", "amplitude", "frequency", "phase"}, key);
  if (j.contains("offset")) base.offset = vec3_from(j["offset"], key + ".offset");
  if (j.contains("amplitude")) base.amplitude = vec3_from(j["amplitude"], key + ".amplitude");
  if (j.contains("frequency")) base.frequency = vec3_from(j["frequency"], key + ".frequency");
  if (j.contains("phase")) base.phase = vec3_from(j["phase"], key + ".phase");
  return base;
}

json to_json(const SinusoidProfile& p) {
  return {{"offset", to_json(p.offset)},
          {"amplitude", to_json(p.amplitude)},
          {"frequency", to_json(p.frequency)},
          {"phase", to_json(p.phase)}};
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(j,
             {"landmarks", "bias", "velocity_profile", "gains", "observer", "duration", "dt",
              "noise_std", "seed", "x0", "xhat0", "bhat0", "z_mode", "a_matrix", "integrator"},
             "config");

  ObserverKind kind = ObserverKind::kMd;
  if (j.contains("observer")) {
    if (!j["observer"].is_string()) throw std::invalid_argument("config: 'observer' must be a string");
    kind = parse_observer_kind(j["observer"].get<std::string>());
  }
  Scenario s = default_scenario(kind);

  if (j.contains("landmarks")) {
    const json& l = j["landmarks"];
    if (!l.is_array()) throw std::invalid_argument("config: 'landmarks' must be an array");
    s.landmarks.clear();
    for (std::size_t i = 0; i < l.size(); ++i) {
      s.landmarks.push_back(vec3_from(l[i], "landmarks[" + std::to_string(i) + "]"));
    }
    s.gains.k.assign(s.landmarks.size(), 1.0);
  }
  if (j.contains("bias")) s.bias = algebra_from(j["bias"], "bias");
  if (j.contains("velocity_profile")) {
    const json& v = j["velocity_profile"];
    check_keys(v, {"omega", "v"}, "velocity_profile");
    if (v.contains("omega")) {
      s.velocity.omega = sinusoid_from(v["omega"], "velocity_profile.omega", s.velocity.omega);
    }
    if (v.contains("v")) s.velocity.v = sinusoid_from(v["v"], "velocity_profile.v", s.velocity.v);
  }
  if (j.contains("gains")) {
    const json& g = j["gains"];
    check_keys(g, {"k", "k_omega", "k_v", "gamma_omega", "gamma_v"}, "gains");
    if (g.contains("k")) {
      if (g["k"].is_number()) {
        s.gains.k.assign(s.landmarks.size(), g["k"].get<double>());
      } else if (g["k"].is_array()) {
        s.gains.k.clear();
        for (const auto& w : g["k"]) s.gains.k.push_back(number_from(w, "gains.k"));
      } else {
        throw std::invalid_argument("config: 'gains.k' must be a number or an array");
      }
    }
    if (g.contains("k_omega")) s.gains.k_omega = number_from(g["k_omega"], "gains.k_omega");
    if (g.contains("k_v")) s.gains.k_v = number_from(g["k_v"], "gains.k_v");
    if (g.contains("gamma_omega")) s.gains.gamma_omega = number_from(g["gamma_omega"], "gains.gamma_omega");
    if (g.contains("gamma_v")) s.gains.gamma_v = number_from(g["gamma_v"], "gains.gamma_v");
  }
  if (j.contains("duration")) s.duration = number_from(j["duration"], "duration");
  if (j.contains("dt")) s.dt = number_from(j["dt"], "dt");
  if (j.contains("noise_std")) s.noise_std = number_from(j["noise_std"], "noise_std");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw std::invalid_argument("config: 'seed' must be a non-negative integer");
    }
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("x0")) s.x0 = pose_from(j["x0"], "x0");
  if (j.contains("xhat0")) s.xhat0 = pose_from(j["xhat0"], "xhat0");
  if (j.contains("bhat0")) s.bhat0 = algebra_from(j["bhat0"], "bhat0");
  if (j.contains("z_mode")) {
    if (!j["z_mode"].is_boolean()) throw std::invalid_argument("config: 'z_mode' must be a boolean");
    s.z_mode = j["z_mode"].get<bool>();
  }
  if (j.contains("a_matrix")) {
    const json& a = j["a_matrix"];
    if (!a.is_array() || a.empty()) throw std::invalid_argument("config: 'a_matrix' must be a matrix");
    const auto rows = static_cast<Eigen::Index>(a.size());
    s.a_matrix.resize(rows, rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const json& row = a[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
        throw std::invalid_argument("config: 'a_matrix' must be square");
      }
      for (Eigen::Index c = 0; c < rows; ++c) {
        s.a_matrix(r, c) = number_from(row[static_cast<std::size_t>(c)], "a_matrix");
      }
    }
  }
  if (j.contains("integrator")) {
    if (!j["integrator"].is_string()) throw std::invalid_argument("config: 'integrator' must be a string");
    s.integrator = parse_integrator(j["integrator"].get<std::string>());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["landmarks"] = json::array();
  for (const auto& l : s.landmarks) j["landmarks"].push_back(to_json(l));
  j["bias"] = to_json(s.bias);
  j["velocity_profile"] = {{"omega", to_json(s.velocity.omega)}, {"v", to_json(s.velocity.v)}};
  j["gains"] = {{"k", s.gains.k},
                {"k_omega", s.gains.k_omega},
                {"k_v", s.gains.k_v},
                {"gamma_omega", s.gains.gamma_omega},
                {"gamma_v", s.gains.gamma_v}};
  j["observer"] = to_string(s.observer);
  j["duration"] = s.duration;
  j["dt"] = s.dt;
  j["noise_std"] = s.noise_std;
  j["seed"] = s.seed;
  j["x0"] = to_json(s.x0);
  j["xhat0"] = to_json(s.xhat0);
  j["bhat0"] = to_json(s.bhat0);
  j["z_mode"] = s.z_mode;
  if (s.a_matrix.size() > 0) {
    json a = json::array();
    for (Eigen::Index r = 0; r < s.a_matrix.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < s.a_matrix.cols(); ++c) row.push_back(s.a_matrix(r, c));
      a.push_back(row);
    }
    j["a_matrix"] = a;
  }
  j["integrator"] = to_string(s.integrator);
  return j.dump(2) + "\n";
}

}  // namespace lieobs

#include "lieobs/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lieobs {

Truth generate_truth(const Scenario& s, int substeps) {
  s.validate();
  if (substeps < 1) throw std::invalid_argument("generate_truth: substeps must be >= 1");
  Truth truth;
  truth.sample_dt = 0.5 * s.dt;
  const std::size_t samples = 2 * s.steps() + 1;
  truth.poses.reserve(samples);
  truth.velocity.reserve(samples);

  const VelocityProfile& profile = s.velocity;
  // Left-invariant kinematics X' = X [u] in right-translated coordinates.
  const RhsEvaluator kinematics = [&profile](double t, const ObserverState& st) {
    return ObserverRhs{adjoint_matrix(st.xhat) * profile(t), Vec6::Zero()};
  };
  const double h = truth.sample_dt / substeps;
  ObserverState state{s.x0, Vec6::Zero()};
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) * truth.sample_dt;
    truth.poses.push_back(state.xhat);
    truth.velocity.push_back(profile(t));
    if (k + 1 == samples) break;
    for (int j = 0; j < substeps; ++j) {
      state = step(state, kinematics, t + j * h, h, Integrator::kRk4MuntheKaas);
    }
  }
  return truth;
}

std::vector<SensorSample> simulate_sensors(const Truth& truth, const Scenario& s) {
  const OutputSet landmarks = s.landmark_outputs();
  const Eigen::MatrixXd A = s.z_mode ? s.coefficients() : Eigen::MatrixXd();
  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto noise3 = [&] {
    if (s.noise_std == 0.0) return Vec3::Zero().eval();
    return Vec3(s.noise_std * normal(rng), s.noise_std * normal(rng), s.noise_std * normal(rng));
  };

  std::vector<SensorSample> out;
  out.reserve(truth.poses.size());
  for (std::size_t k = 0; k < truth.poses.size(); ++k) {
    const double t = static_cast<double>(k) * truth.sample_dt;
    SensorSample sample;
    sample.u_y = truth.velocity[k] + s.bias;
    sample.u_y.head<3>() += noise3();
    sample.u_y.tail<3>() += noise3();
    sample.y = measure(truth.poses[k], landmarks, t);
    for (auto& v : sample.y.values) v += noise3();
    if (s.z_mode) sample.y = z_transform(sample.y, A);
    out.push_back(std::move(sample));
  }
  return out;
}

RhsEvaluator scenario_rhs(const Scenario& s, const InvariantCost& cost,
                          const std::vector<SensorSample>& sensors, double sample_dt) {
  const Gains gains = s.observer_gains();
  const ObserverKind kind = s.observer;
  return [gains, kind, &cost, &sensors, sample_dt](double t, const ObserverState& state) {
    const auto k = static_cast<std::size_t>(std::llround(t / sample_dt));
    if (k >= sensors.size()) {
      std::ostringstream msg;
      msg << "observer evaluated at t = " << t << " beyond the sensor stream";
      throw std::out_of_range(msg.str());
    }
    const SensorSample& in = sensors[k];
    const ClosedFormRhs rhs = kind == ObserverKind::kMd
                                  ? observer_md_rhs(state, in.u_y, in.y, gains, cost)
                                  : observer_vasconcelos_rhs(state, in.u_y, in.y, gains, cost);
    return rhs.as_coordinates(state.xhat);
  };
}

namespace {

bool finite(const ObserverState& s) {
  return s.xhat.rotation().allFinite() && s.xhat.translation().allFinite() && s.bhat.allFinite();
}

}  // namespace

RunResult run(const Scenario& s) {
  const Truth truth = generate_truth(s);
  const std::vector<SensorSample> sensors = simulate_sensors(truth, s);
  return run(s, truth, sensors);
}

RunResult run(const Scenario& s, const Truth& truth, const std::vector<SensorSample>& sensors) {
  s.validate();
  const std::size_t steps = s.steps();
  if (truth.poses.size() < 2 * steps + 1 || sensors.size() < 2 * steps + 1) {
    throw std::invalid_argument("run: truth or sensor stream shorter than the scenario");
  }
  const InvariantCost cost = s.cost();
  const Gains gains = s.observer_gains();
  const Measurement reference = cost.reference_measurement();
  const RhsEvaluator rhs = scenario_rhs(s, cost, sensors, truth.sample_dt);

  RunResult result;
  RunSummary& sum = result.summary;
  sum.observable = cost.observable();
  sum.observability = cost.observability().diagnostic;
  result.trace.reserve(steps + 1);

  ObserverState state{s.xhat0, s.bhat0};
  const double dt2 = s.dt * s.dt;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * s.dt;
    const Pose& X = truth.poses[2 * k];
    const SensorSample& in = sensors[2 * k];

    const ErrorState err = error(X, state.xhat, s.bias, state.bhat);
    const Row6 row = d1_phi_row(state.xhat, in.y, cost).row;
    TraceRow r;
    r.t = t;
    r.dE = frobenius_distance(err.E);
    r.btilde_w = omega_part(err.btilde).norm();
    r.btilde_v = vel_part(err.btilde).norm();
    r.phi = phi_eval(err.E, reference, cost);
    r.lyap = lyapunov(err, gains.gamma, cost);
    r.lyap_dot = lyapunov_dot_analytic(state.xhat, in.y, gains.K,
                                       GainContext{state.xhat, in.u_y, state.bhat, t}, cost);
    r.condX = condition_number(X);
    if (r.lyap_dot > 1e-12 * (1.0 + row.squaredNorm())) ++sum.lyap_dot_violations;
    if (!result.trace.empty()) {
      const double inc = r.lyap - result.trace.back().lyap;
      sum.max_increment_ratio = std::max(sum.max_increment_ratio, inc / dt2);
      if (inc > kMonotonicityC * dt2) ++sum.monotonicity_violations;
    }
    sum.max_translation = std::max(sum.max_translation, X.translation().norm());
    sum.max_condition = std::max(sum.max_condition, r.condX);
    result.trace.push_back(r);
    result.final_state = state;
    if (k == steps) break;

    ObserverState next;
    try {
      next = step(state, rhs, t, s.dt, s.integrator);
    } catch (const std::runtime_error& e) {
      sum.aborted = true;
      sum.abort_reason = e.what();
      break;
    }
    if (!finite(next)) {
      std::ostringstream msg;
      msg << "non-finite observer state after t = " << t;
      sum.aborted = true;
      sum.abort_reason = msg.str();
      break;
    }
    state = next;
  }

  const TraceRow& last = result.trace.back();
  sum.final_dE = last.dE;
  sum.final_btilde = std::hypot(last.btilde_w, last.btilde_v);
  std::vector<double> t;
  t.reserve(result.trace.size());
  for (const auto& row : result.trace) t.push_back(row.t);
  try {
    sum.fit = fit_rate(t, compound_distances(result.trace));
  } catch (const std::exception& e) {
    sum.fit_error = e.what();
  }
  return result;
}

std::vector<double> compound_distances(const std::vector<TraceRow>& trace) {
  std::vector<double> l;
  l.reserve(trace.size());
  for (const auto& r : trace) {
    l.push_back(std::sqrt(r.dE * r.dE + r.btilde_w * r.btilde_w + r.btilde_v * r.btilde_v));
  }
  return l;
}

OrderStudy integrator_order_study(const Scenario& base, Integrator method,
                                  const std::vector<double>& dts, double horizon) {
  if (dts.size() < 2) throw std::invalid_argument("integrator_order_study: need two or more dts");
  const double dt_min = *std::min_element(dts.begin(), dts.end());
  Scenario s = base;
  s.noise_std = 0.0;
  s.dt = dt_min / 100.0;
  s.duration = horizon;
  const Truth truth = generate_truth(s, 2);
  const std::vector<SensorSample> sensors = simulate_sensors(truth, s);
  const InvariantCost cost = s.cost();
  const RhsEvaluator rhs = scenario_rhs(s, cost, sensors, truth.sample_dt);

  auto integrate = [&](double dt, Integrator m) {
    const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
    const double ratio = dt / s.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 ||
        std::abs(static_cast<double>(n) * dt - horizon) > 1e-9 * horizon) {
      throw std::invalid_argument("integrator_order_study: dt must divide the horizon and be a "
                                  "multiple of the reference step");
    }
    ObserverState st{s.xhat0, s.bhat0};
    for (std::size_t k = 0; k < n; ++k) st = step(st, rhs, static_cast<double>(k) * dt, dt, m);
    return st;
  };

  const ObserverState ref = integrate(s.dt, Integrator::kRk4MuntheKaas);
  OrderStudy study;
  study.dts = dts;
  for (double dt : dts) {
    const ObserverState st = integrate(dt, method);
    const Vec6 dx = log_se3(st.xhat * ref.xhat.inverse());
    study.errors.push_back(dx.norm() + (st.bhat - ref.bhat).norm());
  }
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(dts.size());
  for (std::size_t k = 0; k < dts.size(); ++k) {
    mx += std::log(dts[k]);
    my += std::log(study.errors[k]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < dts.size(); ++k) {
    const double dx = std::log(dts[k]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(study.errors[k]) - my);
  }
  study.order = sxy / sxx;
  return study;
}

}  // namespace lieobs

#include "lieobs/observer.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lieobs {

GainK GainK::diagonal(double k_omega, double k_v) {
  GainK K;
  K.kind_ = Kind::kDiagonal;
  K.k_omega_ = k_omega;
  K.k_v_ = k_v;
  return K;
}

GainK GainK::vasconcelos(double k_omega, double k_v) {
  GainK K = diagonal(k_omega, k_v);
  K.kind_ = Kind::kVasconcelos;
  return K;
}

GainK GainK::custom(std::function<Mat6(const GainContext&)> fn) {
  GainK K;
  K.kind_ = Kind::kCustom;
  K.custom_ = std::move(fn);
  return K;
}

Mat6 GainK::matrix(const GainContext& ctx) const {
  if (kind_ == Kind::kCustom) return custom_(ctx);
  Mat6 K = Mat6::Zero();
  K.topLeftCorner<3, 3>() = k_omega_ * Mat3::Identity();
  K.bottomRightCorner<3, 3>() = k_v_ * Mat3::Identity();
  if (kind_ == Kind::kVasconcelos) {
    const Vec3 omega_hat = omega_part(ctx.u_y) - omega_part(ctx.bhat);
    K.bottomRightCorner<3, 3>() += hat3(ctx.xhat.rotation() * omega_hat);
  }
  return K;
}

Mat6 GainGamma::matrix() const {
  Mat6 G = Mat6::Zero();
  G.topLeftCorner<3, 3>() = gamma_omega * Mat3::Identity();
  G.bottomRightCorner<3, 3>() = gamma_v * Mat3::Identity();
  return G;
}

GainReport validate_gains(const GainK& K, const GainGamma& gamma, int samples,
                          std::uint64_t seed) {
  if (!(gamma.gamma_omega > 0.0) || !(gamma.gamma_v > 0.0)) {
    std::ostringstream msg;
    msg << "validate_gains: Gamma is not positive definite (gamma_omega=" << gamma.gamma_omega
        << ", gamma_v=" << gamma.gamma_v << ")";
    throw std::invalid_argument(msg.str());
  }
  GainReport report;
  report.gamma_lower = std::min(gamma.gamma_omega, gamma.gamma_v);
  report.gamma_upper = std::max(gamma.gamma_omega, gamma.gamma_v);
  report.k_lower = std::numeric_limits<double>::infinity();
  report.k_upper = -std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto random_vec6 = [&](double scale) {
    Vec6 v;
    for (int j = 0; j < 6; ++j) v(j) = scale * normal(rng);
    return v;
  };
  for (int s = 0; s < samples; ++s) {
    GainContext ctx;
    if (s > 0) {
      const Vec6 pose_coords = random_vec6(1.0);
      ctx.xhat = exp_se3(pose_coords);
      ctx.u_y = random_vec6(2.0);
      ctx.bhat = random_vec6(0.5);
      ctx.t = 10.0 * std::abs(normal(rng));
    }
    const Mat6 Km = K.matrix(ctx);
    const Mat6 sym = 0.5 * (Km + Km.transpose());
    Eigen::SelfAdjointEigenSolver<Mat6> eig(sym, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues()(0);
    const double hi = eig.eigenvalues()(5);
    if (!(lo > 0.0)) {
      std::ostringstream msg;
      msg << "validate_gains: symmetric part of K is not positive definite at sample " << s
          << " (min eigenvalue " << lo << ", u_y = " << ctx.u_y.transpose()
          << ", bhat = " << ctx.bhat.transpose() << ")";
      throw std::invalid_argument(msg.str());
    }
    report.k_lower = std::min(report.k_lower, lo);
    report.k_upper = std::max(report.k_upper, hi);
    ++report.samples;
  }
  return report;
}

TangentAtPose innovation_group(const Pose& xhat, const Measurement& y, const Mat6& K,
                               const InvariantCost& cost) {
  const Row6 row = d1_phi_row(xhat, y, cost).row;
  return {xhat, K * row.transpose()};
}

Vec6 innovation_bias(const Pose& xhat, const Measurement& y, const GainGamma& gamma,
                     const InvariantCost& cost) {
  const Row6 row = d1_phi_row(xhat, y, cost).row;
  return gamma.matrix() * left_translation_matrix(xhat).transpose() * row.transpose();
}

ObserverRhs observer_generic_rhs(const ObserverState& state, const Vec6& u_y,
                                 const Measurement& y, const Gains& gains,
                                 const InvariantCost& cost, double t) {
  const GainContext ctx{state.xhat, u_y, state.bhat, t};
  const Mat6 K = gains.K.matrix(ctx);
  const Row6 row = d1_phi_row(state.xhat, y, cost).row;
  const Mat6 Ad = adjoint_matrix(state.xhat);
  ObserverRhs out;
  out.xi = Ad * (u_y - state.bhat) - K * row.transpose();
  out.bhat_dot = gains.gamma.matrix() * Ad.transpose() * row.transpose();
  return out;
}

ObserverRhs ClosedFormRhs::as_coordinates(const Pose& xhat) const {
  return {tangent_to_vec6({rotation_rate, translation_rate}, xhat),
          make_vec6(bias_omega_rate, bias_v_rate)};
}

TangentIncrement md_innovation_closed_form(const Pose& xhat, const Measurement& y,
                                           double k_omega, double k_v,
                                           const OutputSet& landmarks) {
  const Mat3& R = xhat.rotation();
  const Vec3& p = xhat.translation();
  TangentIncrement out{Mat3::Zero(), Vec3::Zero()};
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    const Vec3 yhat = R * y.values[i] + p;
    const Vec3 alpha = yhat - landmarks.references[i];
    const Mat3 S = hat3(yhat.cross(landmarks.references[i]));
    out.rotation_rate += landmarks.weights[i] * (-k_omega * S * R);
    out.translation_rate += landmarks.weights[i] * (-k_omega * S * p + k_v * alpha);
  }
  return out;
}

Vec6 md_bias_closed_form(const Pose& xhat, const Measurement& y, const GainGamma& gamma,
                         const OutputSet& landmarks) {
  const Mat3 Rt = xhat.rotation().transpose();
  const Vec3& p = xhat.translation();
  Vec3 bw = Vec3::Zero();
  Vec3 bv = Vec3::Zero();
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    const Vec3& ref = landmarks.references[i];
    const Vec3 alpha = xhat.rotation() * y.values[i] + p - ref;
    bw += landmarks.weights[i] * gamma.gamma_omega * (Rt * ref - Rt * p).cross(y.values[i]);
    bv += landmarks.weights[i] * gamma.gamma_v * (Rt * alpha);
  }
  return make_vec6(bw, bv);
}

ClosedFormRhs observer_md_rhs(const ObserverState& state, const Vec6& u_y,
                              const Measurement& y, const Gains& gains,
                              const InvariantCost& cost) {
  if (!cost.outputs().all_landmarks()) {
    throw std::invalid_argument("observer_md_rhs: requires a landmark cost");
  }
  if (gains.K.kind() != GainK::Kind::kDiagonal) {
    throw std::invalid_argument("observer_md_rhs: requires a diagonal gain");
  }
  if (y.values.size() != cost.outputs().size()) {
    throw std::invalid_argument("observer_md_rhs: measurement cardinality mismatch");
  }
  const Mat3& R = state.xhat.rotation();
  const Vec3 omega_hat = omega_part(u_y) - omega_part(state.bhat);
  const Vec3 vel_hat = vel_part(u_y) - vel_part(state.bhat);
  const TangentIncrement innov = md_innovation_closed_form(
      state.xhat, y, gains.K.k_omega(), gains.K.k_v(), cost.outputs());
  const Vec6 bias = md_bias_closed_form(state.xhat, y, gains.gamma, cost.outputs());
  return {R * hat3(omega_hat) - innov.rotation_rate, R * vel_hat - innov.translation_rate,
          omega_part(bias), vel_part(bias)};
}

ClosedFormRhs observer_vasconcelos_rhs(const ObserverState& state, const Vec6& u_y,
                                       const Measurement& z, const Gains& gains,
                                       const InvariantCost& cost) {
  const OutputSet& out = cost.outputs();
  const std::size_t n = out.size();
  bool direction_layout = n >= 2 && out.kinds[n - 1] == ActionKind::kOffsetDirection;
  for (std::size_t j = 0; j + 1 < n && direction_layout; ++j) {
    direction_layout = out.kinds[j] == ActionKind::kDirection;
  }
  if (!direction_layout) {
    throw std::invalid_argument("observer_vasconcelos_rhs: requires a direction cost");
  }
  if (gains.K.kind() != GainK::Kind::kVasconcelos) {
    throw std::invalid_argument("observer_vasconcelos_rhs: requires the skew-augmented gain");
  }
  if (z.values.size() != n) {
    throw std::invalid_argument("observer_vasconcelos_rhs: measurement cardinality mismatch");
  }
  const double kw = gains.K.k_omega();
  const double kv = gains.K.k_v();
  const double gw = gains.gamma.gamma_omega;
  const double gv = gains.gamma.gamma_v;
  const Mat3& R = state.xhat.rotation();
  const Mat3 Rt = R.transpose();
  const Vec3& p = state.xhat.translation();
  const Vec3 omega_hat = omega_part(u_y) - omega_part(state.bhat);
  const Vec3 vel_hat = vel_part(u_y) - vel_part(state.bhat);

  const double kn = out.weights[n - 1];
  const Vec3& zref_n = out.references[n - 1];
  const Vec3& z_n = z.values[n - 1];
  const Vec3 alpha_n = R * z_n - p - zref_n;

  Vec3 rot_sum = Vec3::Zero();   // sum_j k_j (Rhat z_j) x zref_j
  Vec3 bias_sum = Vec3::Zero();  // sum_j k_j (Rhat^T zref_j) x z_j
  for (std::size_t j = 0; j < n; ++j) {
    rot_sum += out.weights[j] * (R * z.values[j]).cross(out.references[j]);
    bias_sum += out.weights[j] * (Rt * out.references[j]).cross(z.values[j]);
  }
  const Mat3 centroid_term = hat3(p.cross(zref_n));

  ClosedFormRhs rhs;
  rhs.rotation_rate = R * hat3(omega_hat) - kw * kn * centroid_term * R + kw * hat3(rot_sum) * R;
  rhs.translation_rate = R * vel_hat +
                         kn * (kv * Mat3::Identity() + hat3(R * omega_hat)) * alpha_n -
                         kw * kn * centroid_term * p + kw * hat3(rot_sum) * p;
  rhs.bias_omega_rate = gw * kn * (Rt * p.cross(R * z_n - p)) + gw * bias_sum;
  rhs.bias_v_rate = -gv * kn * (Rt * alpha_n);
  return rhs;
}

Integrator parse_integrator(const std::string& name) {
  if (name == "lie-euler") return Integrator::kLieEuler;
  if (name == "rk4-mk") return Integrator::kRk4MuntheKaas;
  throw std::invalid_argument("unknown integrator '" + name + "' (expected lie-euler or rk4-mk)");
}

std::string to_string(Integrator method) {
  return method == Integrator::kLieEuler ? "lie-euler" : "rk4-mk";
}

namespace {

ObserverRhs checked(const RhsEvaluator& rhs, double t, const ObserverState& s) {
  ObserverRhs out = rhs(t, s);
  if (!out.xi.allFinite() || !out.bhat_dot.allFinite()) {
    std::ostringstream msg;
    msg << "step: non-finite right-hand side at t = " << t << " (xi = " << out.xi.transpose()
        << ", bhat_dot = " << out.bhat_dot.transpose() << ")";
    throw std::runtime_error(msg.str());
  }
  return out;
}

}  // namespace

ObserverState step(const ObserverState& state, const RhsEvaluator& rhs, double t, double dt,
                   Integrator method) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (method == Integrator::kLieEuler) {
    const ObserverRhs f = checked(rhs, t, state);
    return {(exp_se3(dt * f.xi) * state.xhat).renormalized(), state.bhat + dt * f.bhat_dot};
  }

  const Pose& X0 = state.xhat;
  const Vec6& b0 = state.bhat;
  const ObserverRhs f1 = checked(rhs, t, state);
  const Vec6 k1 = dt * f1.xi;

  const ObserverRhs f2 =
      checked(rhs, t + 0.5 * dt, {exp_se3(0.5 * k1) * X0, b0 + 0.5 * dt * f1.bhat_dot});
  const Vec6 k2 = dt * dexp_inv(0.5 * k1, f2.xi);

  const ObserverRhs f3 =
      checked(rhs, t + 0.5 * dt, {exp_se3(0.5 * k2) * X0, b0 + 0.5 * dt * f2.bhat_dot});
  const Vec6 k3 = dt * dexp_inv(0.5 * k2, f3.xi);

  const ObserverRhs f4 = checked(rhs, t + dt, {exp_se3(k3) * X0, b0 + dt * f3.bhat_dot});
  const Vec6 k4 = dt * dexp_inv(k3, f4.xi);

  const Vec6 theta = (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  const Vec6 db = dt * (f1.bhat_dot + 2.0 * f2.bhat_dot + 2.0 * f3.bhat_dot + f4.bhat_dot) / 6.0;
  return {(exp_se3(theta) * X0).renormalized(), b0 + db};
}

}  // namespace lieobs

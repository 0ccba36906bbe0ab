// Gain-mapped group estimator and bias estimator on SE(3).
//
// The group estimator is Xhat' = Xhat [u_y - bhat] - K [D1 phi(Xhat, y)] and
// the bias estimator is bhat' = Gamma T_I L_Xhat^* [D1 phi(Xhat, y)]. Both are
// provided in a generic matrix form (any gain and cost) and in the closed
// forms for the two SE(3) observer families.
#pragma once

#include "lieobs/cost.hpp"
#include "lieobs/lie.hpp"
#include "lieobs/outputs.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace lieobs {

struct ObserverState {
  Pose xhat;
  Vec6 bhat = Vec6::Zero();
};

/// Arguments a gain mapping may depend on.
struct GainContext {
  Pose xhat;
  Vec6 u_y = Vec6::Zero();
  Vec6 bhat = Vec6::Zero();
  double t = 0.0;
};

/// Gain mapping K from T*_Xhat G to T_Xhat G, as a 6x6 matrix against the
/// right-translated basis and its dual.
class GainK {
 public:
  enum class Kind { kDiagonal, kVasconcelos, kCustom };

  /// diag(k_omega I, k_v I).
  static GainK diagonal(double k_omega, double k_v);
  /// diag(k_omega I, k_v I) + diag(0, (Rhat (Omega_y - bhat_omega))_x).
  static GainK vasconcelos(double k_omega, double k_v);
  /// Arbitrary state-dependent gain; only checked by validate_gains.
  static GainK custom(std::function<Mat6(const GainContext&)> fn);

  Kind kind() const { return kind_; }
  double k_omega() const { return k_omega_; }
  double k_v() const { return k_v_; }

  Mat6 matrix(const GainContext& ctx) const;

 private:
  Kind kind_ = Kind::kDiagonal;
  double k_omega_ = 1.0;
  double k_v_ = 1.0;
  std::function<Mat6(const GainContext&)> custom_;
};

/// Constant bias gain diag(gamma_omega I, gamma_v I).
struct GainGamma {
  double gamma_omega = 1.0;
  double gamma_v = 1.0;

  Mat6 matrix() const;
};

struct Gains {
  GainK K = GainK::diagonal(1.0, 1.0);
  GainGamma gamma;
};

struct GainReport {
  double k_lower = 0.0;  // min eigenvalue of the symmetric part of [[K]]
  double k_upper = 0.0;  // max eigenvalue of the symmetric part of [[K]]
  double gamma_lower = 0.0;
  double gamma_upper = 0.0;
  int samples = 0;
};

/// Samples random contexts and checks that the symmetric part of [[K]] is
/// positive definite and [[Gamma]] is SPD. Throws std::invalid_argument with
/// the offending sample on violation.
GainReport validate_gains(const GainK& K, const GainGamma& gamma, int samples = 256,
                          std::uint64_t seed = 11);

/// K [D1 phi] in right-translated coordinates at Xhat.
TangentAtPose innovation_group(const Pose& xhat, const Measurement& y, const Mat6& K,
                               const InvariantCost& cost);

/// Gamma [[T_I L_Xhat]]^T [[D1 phi]]^T.
Vec6 innovation_bias(const Pose& xhat, const Measurement& y, const GainGamma& gamma,
                     const InvariantCost& cost);

/// Observer vector field: xi are the right-translated coordinates of Xhat'.
struct ObserverRhs {
  Vec6 xi = Vec6::Zero();
  Vec6 bhat_dot = Vec6::Zero();
};

/// Generic assembly: xi = Ad_Xhat (u_y - bhat) - K row^T.
ObserverRhs observer_generic_rhs(const ObserverState& state, const Vec6& u_y,
                                 const Measurement& y, const Gains& gains,
                                 const InvariantCost& cost, double t = 0.0);

/// Observer right-hand side written out in (R, p, b_omega, b_v) form.
struct ClosedFormRhs {
  Mat3 rotation_rate;
  Vec3 translation_rate;
  Vec3 bias_omega_rate;
  Vec3 bias_v_rate;

  ObserverRhs as_coordinates(const Pose& xhat) const;
};

/// Closed-form landmark innovation sum_i k_i (-k_w (yhat_i x y_ref_i)_x Rhat,
/// -k_w (yhat_i x y_ref_i)_x phat + k_v alpha_i), yhat_i = Rhat y_i + phat.
TangentIncrement md_innovation_closed_form(const Pose& xhat, const Measurement& y,
                                           double k_omega, double k_v,
                                           const OutputSet& landmarks);

/// Closed-form landmark bias innovation
/// sum_i k_i (g_w (Rhat^T y_ref_i - Rhat^T phat) x y_i, g_v Rhat^T alpha_i).
Vec6 md_bias_closed_form(const Pose& xhat, const Measurement& y, const GainGamma& gamma,
                         const OutputSet& landmarks);

/// Landmark observer with diagonal gain, closed form. Throws
/// std::invalid_argument if the cost is not a landmark cost or K is not diagonal.
ClosedFormRhs observer_md_rhs(const ObserverState& state, const Vec6& u_y,
                              const Measurement& y, const Gains& gains,
                              const InvariantCost& cost);

/// Direction-output observer with the skew-augmented gain, closed form.
/// `z` are the transformed outputs. Throws std::invalid_argument if the cost
/// is not a direction cost or K is not of the vasconcelos kind.
ClosedFormRhs observer_vasconcelos_rhs(const ObserverState& state, const Vec6& u_y,
                                       const Measurement& z, const Gains& gains,
                                       const InvariantCost& cost);

enum class Integrator { kLieEuler, kRk4MuntheKaas };

Integrator parse_integrator(const std::string& name);
std::string to_string(Integrator method);

using RhsEvaluator = std::function<ObserverRhs(double t, const ObserverState& state)>;

/// One step of a structure-preserving integrator for the coupled
/// (Xhat, bhat) dynamics. lie-euler: Xhat <- exp(dt xi) Xhat. rk4-mk: classical
/// four-stage Munthe-Kaas scheme with the same retraction. Throws
/// std::runtime_error on a non-finite right-hand side; std::invalid_argument
/// when dt <= 0.
ObserverState step(const ObserverState& state, const RhsEvaluator& rhs, double t, double dt,
                   Integrator method = Integrator::kLieEuler);

}  // namespace lieobs

// Error coordinates, Lyapunov evaluation, closed-loop error dynamics,
// linearisation about (I, 0), persistency of excitation and rate fitting.
#pragma once

#include "lieobs/cost.hpp"
#include "lieobs/lie.hpp"
#include "lieobs/observer.hpp"
#include "lieobs/outputs.hpp"

#include <algorithm>
#include <complex>
#include <string>
#include <vector>

namespace lieobs {

/// E = Xhat X^{-1}, btilde = bhat - b.
struct ErrorState {
  Pose E;
  Vec6 btilde = Vec6::Zero();
};

ErrorState error(const Pose& X, const Pose& xhat, const Vec6& b, const Vec6& bhat);

/// l^2 = d(E)^2 + |btilde|^2.
double compound_distance(const ErrorState& err);

/// phi(E, y_ref) + btilde^T Gamma^{-1} btilde / 2. Throws std::invalid_argument
/// unless Gamma is positive definite.
double lyapunov(const ErrorState& err, const GainGamma& gamma, const InvariantCost& cost);

/// -row K row^T with row = [[D1 phi(Xhat, y)]] and K evaluated at `ctx`.
double lyapunov_dot_analytic(const Pose& xhat, const Measurement& y, const GainK& K,
                             const GainContext& ctx, const InvariantCost& cost);

/// Right-translated coordinates of E' and btilde'.
struct ErrorRhs {
  Vec6 zeta = Vec6::Zero();
  Vec6 btilde_dot = Vec6::Zero();
};

/// zeta = -K row^T - Ad_E Ad_X btilde and btilde' = Gamma Ad_X^T Ad_E^T row^T,
/// row = [[D1 phi(E, y_ref)]]. The gain context uses Xhat = E X, u_y and
/// bhat = b + btilde.
ErrorRhs error_dynamics_rhs(const ErrorState& err, const Pose& X, const Gains& gains,
                            const InvariantCost& cost, const Vec6& u_y = Vec6::Zero(),
                            const Vec6& b = Vec6::Zero());

/// Error dynamics of the translation group R^3 with landmark outputs
/// y_i = y_ref_i - x and cost sum_i k_i |y_i + xhat - y_ref_i|^2 / 2. The
/// gain is k_v I and Gamma is gamma_v I.
struct R3ErrorRhs {
  Vec3 e_dot = Vec3::Zero();
  Vec3 btilde_dot = Vec3::Zero();
};
R3ErrorRhs error_dynamics_rhs_r3(const Vec3& e, const Vec3& btilde, const Vec3& x,
                                 const Gains& gains, const OutputSet& landmarks);

enum class GroupKind { kSe3, kR3 };
GroupKind parse_group(const std::string& name);

struct AutonomyReport {
  double group_discrepancy = 0.0;  // max |E'(X_a) - E'(X_b)|
  double bias_discrepancy = 0.0;   // max |btilde'(X_a) - btilde'(X_b)|
  double total() const { return std::max(group_discrepancy, bias_discrepancy); }
};

/// Evaluates the error dynamics of the landmark observer with diagonal gain
/// at a fixed (E, btilde) for each sample of X and returns the largest
/// pairwise discrepancy. For kR3 only the translational parts of E,
/// btilde and the samples are used.
AutonomyReport autonomy_probe(GroupKind group, const ErrorState& err,
                              const std::vector<Pose>& samples, const Gains& gains,
                              const InvariantCost& cost);

struct LinearizedSystem {
  Eigen::Matrix<double, 12, 12> block;  // [[-K H, -Ad_X], [Gamma Ad_X^T H, 0]]
  Mat6 H;
  Mat6 K;
  Mat6 Ad;
  Mat6 Gamma;
  Mat6 L;  // Gamma = L^T L
  Mat6 A;  // -L K H L^{-1}
  Mat6 B;  // -L Ad^T L^T
  Mat6 P;  // L^{-T} H L^{-1}
  Mat6 Q;  // (H L^{-1})^T (K + K^T) (H L^{-1}) for constant X
  Eigen::Matrix<std::complex<double>, 12, 1> eigenvalues;

  double max_real_eigenvalue() const;
};

/// [[-K H, -Ad], [Gamma Ad^T H, 0]].
Eigen::Matrix<double, 12, 12> assemble_block(const Mat6& K, const Mat6& H, const Mat6& Ad,
                                             const Mat6& Gamma);

/// Linearises the error dynamics about (I, 0) at the true pose X. Throws
/// std::invalid_argument if the Cholesky factorisation of Gamma fails.
LinearizedSystem linearize(const Pose& X, const Gains& gains, const InvariantCost& cost,
                           const Vec6& u_y = Vec6::Zero(), const Vec6& b = Vec6::Zero());

/// Central-difference Jacobian of error_dynamics_rhs in (eps, delta) at (I, 0),
/// with E = exp(eps).
Eigen::Matrix<double, 12, 12> error_dynamics_jacobian(const Pose& X, const Gains& gains,
                                                      const InvariantCost& cost,
                                                      const Vec6& u_y = Vec6::Zero(),
                                                      const Vec6& b = Vec6::Zero(),
                                                      double h = 1e-5);

struct PeReport {
  double min_eigenvalue = 0.0;  // of the trapezoidal integral of B B^T
  double lower_bound = 0.0;     // c0_bar * T
  double c0_bar = 0.0;
  double max_condition = 0.0;   // c0 over the window
  double window = 0.0;
  bool pass() const { return min_eigenvalue >= lower_bound - 1e-9; }
};

/// Trapezoidal integral of B B^T = L Ad^T Gamma Ad L^T over the samples of X
/// taken every `dt` seconds. The window is (samples - 1) dt.
PeReport pe_check(const std::vector<Pose>& trajectory, double dt, const GainGamma& gamma);

struct RateFit {
  double slope = 0.0;  // d log l / dt
  double rate = 0.0;   // -slope
  double r_squared = 0.0;
  std::size_t used = 0;
};

/// Least-squares fit of log l against t over the tail half of the samples
/// above `floor`. Throws std::invalid_argument for fewer than 50 samples,
/// mismatched lengths or non-positive samples, and std::runtime_error when
/// fewer than 10 samples lie above the floor.
RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& l,
                 double floor = 1e-10);

}  // namespace lieobs

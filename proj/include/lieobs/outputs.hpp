// Homogeneous output actions of SE(3) and the observability checks built on
// their stabilizers.
#pragma once

#include "lieobs/lie.hpp"

#include <string>
#include <vector>

namespace lieobs {

/// Right actions of SE(3) on R^3 used as output models.
enum class ActionKind {
  /// h(X, y) = R^T y - R^T p (body-frame landmark position).
  kLandmark,
  /// g(X, z) = R^T z (difference of landmarks).
  kDirection,
  /// g(X, z) = R^T z + R^T p (negated landmark centroid).
  kOffsetDirection,
};

Vec3 act(ActionKind kind, const Pose& X, const Vec3& y);

Vec3 measure_landmark(const Pose& X, const Vec3& reference);
Vec3 measure_direction(const Pose& X, const Vec3& reference, bool is_last);

using Mat36 = Eigen::Matrix<double, 3, 6>;

/// Jacobian of eps -> act(exp(eps)^{-1}, y) at eps = 0.
Mat36 action_generator(ActionKind kind, const Vec3& y);

/// Reference outputs together with their action and cost weight k_i.
struct OutputSet {
  std::vector<Vec3> references;
  std::vector<double> weights;
  std::vector<ActionKind> kinds;

  std::size_t size() const { return references.size(); }
  bool all_landmarks() const;
  /// Throws std::invalid_argument on empty sets, size mismatches or
  /// non-positive weights.
  void validate() const;
};

OutputSet make_landmark_set(std::vector<Vec3> references, std::vector<double> weights);
OutputSet make_landmark_set(std::vector<Vec3> references, double weight = 1.0);

/// Outputs z_j obtained from n landmark readings through a full-rank
/// (n-1)x(n-1) coefficient matrix A.
struct DirectionOutputSet {
  Eigen::MatrixXd coefficients;
  OutputSet outputs;
};

DirectionOutputSet make_direction_set(const std::vector<Vec3>& landmarks,
                                      const Eigen::MatrixXd& coefficients,
                                      std::vector<double> weights);

struct Measurement {
  std::vector<Vec3> values;
  double timestamp = 0.0;
};

/// Evaluates every output action of `outputs` at X.
Measurement measure(const Pose& X, const OutputSet& outputs, double timestamp = 0.0);

/// z_j = sum_i a_ij (y_{i+1} - y_i) for j < n, z_n = -(1/n) sum_i y_i.
/// Throws std::invalid_argument when n < 2, A has the wrong shape, or A is
/// rank deficient (smallest singular value <= 1e-9).
std::vector<Vec3> z_transform(const std::vector<Vec3>& y, const Eigen::MatrixXd& A);
Measurement z_transform(const Measurement& y, const Eigen::MatrixXd& A);

struct ObservabilityReport {
  bool pass = false;
  std::string diagnostic;
};

/// Default scaled collinearity threshold.
inline constexpr double kCollinearityTol = 1e-9;

/// Passes iff three references exist whose difference vectors are not parallel.
ObservabilityReport check_observability_landmarks(const std::vector<Vec3>& references,
                                                  double tol = kCollinearityTol);

/// Passes iff two of the pure-direction references are non-collinear.
ObservabilityReport check_observability_directions(const std::vector<Vec3>& directions,
                                                   double tol = kCollinearityTol);

/// Dispatches on the action kinds of the set. For direction sets only the
/// kDirection references take part in the pairwise test.
ObservabilityReport check_observability(const OutputSet& outputs,
                                        double tol = kCollinearityTol);

/// 6 - rank(sum_i k_i J_i^T J_i), with J_i the central-difference Jacobian
/// of eps -> act(exp(eps)^{-1}, y_i). Singular values below
/// rel_tol * sigma_max count as zero.
int stabilizer_kernel_dimension(const OutputSet& outputs, double fd_step = 1e-6,
                                double rel_tol = 1e-7);

}  // namespace lieobs

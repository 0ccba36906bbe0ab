#include "lieobs/outputs.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace lieobs {

Vec3 act(ActionKind kind, const Pose& X, const Vec3& y) {
  const Mat3 Rt = X.rotation().transpose();
  switch (kind) {
    case ActionKind::kLandmark:
      return Rt * (y - X.translation());
    case ActionKind::kDirection:
      return Rt * y;
    case ActionKind::kOffsetDirection:
      return Rt * (y + X.translation());
  }
  throw std::logic_error("act: unknown action kind");
}

Vec3 measure_landmark(const Pose& X, const Vec3& reference) {
  return act(ActionKind::kLandmark, X, reference);
}

Vec3 measure_direction(const Pose& X, const Vec3& reference, bool is_last) {
  return act(is_last ? ActionKind::kOffsetDirection : ActionKind::kDirection, X, reference);
}

Mat36 action_generator(ActionKind kind, const Vec3& y) {
  // act(exp(-eps), y) = y + d/d eps, with exp(-eps) ~ (I - W, -v).
  Mat36 J = Mat36::Zero();
  J.leftCols<3>() = -hat3(y);
  switch (kind) {
    case ActionKind::kLandmark:
      J.rightCols<3>() = Mat3::Identity();
      break;
    case ActionKind::kDirection:
      break;
    case ActionKind::kOffsetDirection:
      J.rightCols<3>() = -Mat3::Identity();
      break;
  }
  return J;
}

bool OutputSet::all_landmarks() const {
  return std::all_of(kinds.begin(), kinds.end(),
                     [](ActionKind k) { return k == ActionKind::kLandmark; });
}

void OutputSet::validate() const {
  if (references.empty()) throw std::invalid_argument("OutputSet: at least one output is required");
  if (weights.size() != references.size() || kinds.size() != references.size()) {
    throw std::invalid_argument("OutputSet: references, weights and kinds differ in length");
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) {
      std::ostringstream msg;
      msg << "OutputSet: weight " << i << " must be strictly positive (got " << weights[i] << ")";
      throw std::invalid_argument(msg.str());
    }
    if (!references[i].allFinite()) throw std::invalid_argument("OutputSet: non-finite reference");
  }
}

OutputSet make_landmark_set(std::vector<Vec3> references, std::vector<double> weights) {
  OutputSet set;
  set.kinds.assign(references.size(), ActionKind::kLandmark);
  set.references = std::move(references);
  set.weights = std::move(weights);
  set.validate();
  return set;
}

OutputSet make_landmark_set(std::vector<Vec3> references, double weight) {
  std::vector<double> weights(references.size(), weight);
  return make_landmark_set(std::move(references), std::move(weights));
}

namespace {

void check_coefficients(const Eigen::MatrixXd& A, std::size_t n) {
  if (n < 2) throw std::invalid_argument("z_transform: at least two outputs are required");
  if (A.rows() != static_cast<Eigen::Index>(n - 1) || A.cols() != A.rows()) {
    std::ostringstream msg;
    msg << "z_transform: coefficient matrix must be " << n - 1 << "x" << n - 1 << ", got "
        << A.rows() << "x" << A.cols();
    throw std::invalid_argument(msg.str());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (!(smin > 1e-9)) {
    std::ostringstream msg;
    msg << "z_transform: coefficient matrix is rank deficient (smallest singular value " << smin
        << "); information would be lost";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

std::vector<Vec3> z_transform(const std::vector<Vec3>& y, const Eigen::MatrixXd& A) {
  const std::size_t n = y.size();
  check_coefficients(A, n);
  std::vector<Vec3> z(n, Vec3::Zero());
  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      z[j] += A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * (y[i + 1] - y[i]);
    }
  }
  Vec3 sum = Vec3::Zero();
  for (const auto& v : y) sum += v;
  z[n - 1] = -sum / static_cast<double>(n);
  return z;
}

Measurement z_transform(const Measurement& y, const Eigen::MatrixXd& A) {
  return {z_transform(y.values, A), y.timestamp};
}

DirectionOutputSet make_direction_set(const std::vector<Vec3>& landmarks,
                                      const Eigen::MatrixXd& coefficients,
                                      std::vector<double> weights) {
  DirectionOutputSet set;
  set.coefficients = coefficients;
  set.outputs.references = z_transform(landmarks, coefficients);
  set.outputs.kinds.assign(landmarks.size(), ActionKind::kDirection);
  set.outputs.kinds.back() = ActionKind::kOffsetDirection;
  set.outputs.weights = std::move(weights);
  set.outputs.validate();
  return set;
}

Measurement measure(const Pose& X, const OutputSet& outputs, double timestamp) {
  Measurement m;
  m.timestamp = timestamp;
  m.values.reserve(outputs.size());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    m.values.push_back(act(outputs.kinds[i], X, outputs.references[i]));
  }
  return m;
}

namespace {

bool non_parallel(const Vec3& a, const Vec3& b, double tol) {
  const double scale = a.norm() * b.norm();
  if (scale == 0.0) return false;
  return a.cross(b).norm() > tol * scale;
}

}  // namespace

ObservabilityReport check_observability_landmarks(const std::vector<Vec3>& refs, double tol) {
  const std::size_t n = refs.size();
  if (n < 3) {
    return {false, "fewer than three landmarks (" + std::to_string(n) + ")"};
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (non_parallel(refs[i] - refs[j], refs[j] - refs[k], tol)) {
          std::ostringstream msg;
          msg << "landmarks " << i << ", " << j << ", " << k << " are not on a common line";
          return {true, msg.str()};
        }
      }
    }
  }
  return {false, "all landmarks lie on a common line"};
}

ObservabilityReport check_observability_directions(const std::vector<Vec3>& dirs, double tol) {
  const std::size_t n = dirs.size();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      if (non_parallel(dirs[j], dirs[k], tol)) {
        std::ostringstream msg;
        msg << "directions " << j << " and " << k << " are non-collinear";
        return {true, msg.str()};
      }
    }
  }
  return {false, n < 2 ? "fewer than two direction references"
                       : "all direction references are collinear"};
}

ObservabilityReport check_observability(const OutputSet& outputs, double tol) {
  if (outputs.all_landmarks()) return check_observability_landmarks(outputs.references, tol);
  std::vector<Vec3> dirs;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs.kinds[i] == ActionKind::kDirection) dirs.push_back(outputs.references[i]);
  }
  return check_observability_directions(dirs, tol);
}

int stabilizer_kernel_dimension(const OutputSet& outputs, double fd_step, double rel_tol) {
  Mat6 M = Mat6::Zero();
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    Mat36 J;
    for (int j = 0; j < 6; ++j) {
      const Vec6 e = Vec6::Unit(j) * fd_step;
      const Vec3 plus = act(outputs.kinds[i], exp_se3(e).inverse(), outputs.references[i]);
      const Vec3 minus = act(outputs.kinds[i], exp_se3(-e).inverse(), outputs.references[i]);
      J.col(j) = (plus - minus) / (2.0 * fd_step);
    }
    // Hessian of (k_i / 2) ||r||^2 is k_i I.
    M += outputs.weights[i] * J.transpose() * J;
  }
  Eigen::JacobiSVD<Mat6> svd(M);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 6;
  int kernel = 0;
  for (int j = 0; j < 6; ++j) {
    if (s(j) < rel_tol * s(0)) ++kernel;
  }
  return kernel;
}

}  // namespace lieobs

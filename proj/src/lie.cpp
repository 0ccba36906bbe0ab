#include "lieobs/lie.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lieobs {

namespace {

constexpr double kSmallAngle = 1e-4;
constexpr double kLogPiMargin = 1e-6;

}  // namespace

Mat3 hat3(const Vec3& v) {
  Mat3 S;
  S << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return S;
}

Vec3 vee3(const Mat3& S) {
  const double asym = (S + S.transpose()).norm();
  if (asym >= 1e-9) {
    std::ostringstream msg;
    msg << "vee3: matrix is not skew-symmetric (||S + S^T||_F = " << asym << ")";
    throw std::invalid_argument(msg.str());
  }
  return Vec3(S(2, 1), S(0, 2), S(1, 0));
}

bool is_rotation(const Mat3& R, double tol) {
  if (!R.allFinite()) return false;
  const double ortho = (R.transpose() * R - Mat3::Identity()).norm();
  return ortho <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

Mat3 project_to_rotation(const Mat3& R) {
  Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 U = svd.matrixU();
  const Mat3 V = svd.matrixV();
  if ((U * V.transpose()).determinant() < 0.0) U.col(2) *= -1.0;
  return U * V.transpose();
}

Mat3 exp_so3(const Vec3& omega) {
  const double theta2 = omega.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 W = hat3(omega);
  double a;
  double b;
  if (theta < kSmallAngle) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  return Mat3::Identity() + a * W + b * W * W;
}

Vec3 log_so3(const Mat3& R) {
  const Vec3 axis2(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  const double s = 0.5 * axis2.norm();
  const double c = 0.5 * (R.trace() - 1.0);
  const double theta = std::atan2(s, c);
  if (theta > M_PI - kLogPiMargin) {
    std::ostringstream msg;
    msg << "log_so3: rotation angle " << theta
        << " rad is too close to pi for a unique logarithm";
    throw std::domain_error(msg.str());
  }
  if (theta < kSmallAngle) return 0.5 * (1.0 + theta * theta / 6.0) * axis2;
  return (theta / (2.0 * std::sin(theta))) * axis2;
}

Pose::Pose(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!is_rotation(rotation)) {
    throw std::invalid_argument("Pose: rotation block is not in SO(3)");
  }
  if (!translation.allFinite()) {
    throw std::invalid_argument("Pose: translation has non-finite entries");
  }
}

Pose Pose::from_matrix(const Mat4& m) {
  if ((m.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).norm() > kRotationTol) {
    throw std::invalid_argument("Pose::from_matrix: bottom row must be (0,0,0,1)");
  }
  return Pose(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
}

Mat4 Pose::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

Pose Pose::operator*(const Pose& other) const {
  return Pose(rotation_ * other.rotation_,
              translation_ + rotation_ * other.translation_, Unchecked{});
}

Pose Pose::inverse() const {
  const Mat3 Rt = rotation_.transpose();
  return Pose(Rt, -Rt * translation_, Unchecked{});
}

Pose Pose::renormalized() const {
  const double drift = (rotation_.transpose() * rotation_ - Mat3::Identity()).norm();
  if (drift <= kRotationTol) return *this;
  return Pose(project_to_rotation(rotation_), translation_, Unchecked{});
}

Mat4 hat6(const Vec6& xi) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = hat3(omega_part(xi));
  m.topRightCorner<3, 1>() = vel_part(xi);
  return m;
}

Vec6 vee6(const Mat4& m) {
  return make_vec6(vee3(m.topLeftCorner<3, 3>()), m.topRightCorner<3, 1>());
}

namespace {

// V = I + b W + c W^2 maps v to the translation of exp((omega, v)).
Mat3 left_jacobian_so3(const Vec3& omega) {
  const double theta2 = omega.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 W = hat3(omega);
  double b;
  double c;
  if (theta < kSmallAngle) {
    b = 0.5 - theta2 / 24.0;
    c = 1.0 / 6.0 - theta2 / 120.0;
  } else {
    b = (1.0 - std::cos(theta)) / theta2;
    c = (theta - std::sin(theta)) / (theta2 * theta);
  }
  return Mat3::Identity() + b * W + c * W * W;
}

Mat3 left_jacobian_so3_inverse(const Vec3& omega) {
  const double theta2 = omega.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 W = hat3(omega);
  double d;
  if (theta < kSmallAngle) {
    d = 1.0 / 12.0 + theta2 / 720.0;
  } else {
    d = (1.0 - theta * std::sin(theta) / (2.0 * (1.0 - std::cos(theta)))) / theta2;
  }
  return Mat3::Identity() - 0.5 * W + d * W * W;
}

}  // namespace

Pose exp_se3(const Vec6& xi) {
  const Vec3 omega = omega_part(xi);
  const Mat3 R = exp_so3(omega);
  const Vec3 p = left_jacobian_so3(omega) * vel_part(xi);
  return Pose(R, p);
}

Vec6 log_se3(const Pose& X) {
  const Vec3 omega = log_so3(X.rotation());
  return make_vec6(omega, left_jacobian_so3_inverse(omega) * X.translation());
}

Vec6 bracket(const Vec6& a, const Vec6& b) {
  const Vec3 wa = omega_part(a);
  const Vec3 wb = omega_part(b);
  return make_vec6(wa.cross(wb), wa.cross(vel_part(b)) - wb.cross(vel_part(a)));
}

Vec6 dexp_inv(const Vec6& theta, const Vec6& u) {
  const Vec6 c1 = bracket(theta, u);
  return u - 0.5 * c1 + bracket(theta, c1) / 12.0;
}

Mat6 adjoint_matrix(const Pose& X) {
  const Mat3& R = X.rotation();
  Mat6 ad = Mat6::Zero();
  ad.topLeftCorner<3, 3>() = R;
  ad.bottomLeftCorner<3, 3>() = hat3(X.translation()) * R;
  ad.bottomRightCorner<3, 3>() = R;
  return ad;
}

Mat6 left_translation_matrix(const Pose& X) { return adjoint_matrix(X); }

TangentIncrement vec6_to_tangent(const Vec6& w, const Pose& base) {
  const Mat3 W = hat3(omega_part(w));
  return {W * base.rotation(), W * base.translation() + vel_part(w)};
}

Vec6 tangent_to_vec6(const TangentIncrement& t, const Pose& base) {
  const Mat3 W = t.rotation_rate * base.rotation().transpose();
  const Vec3 w = 0.5 * Vec3(W(2, 1) - W(1, 2), W(0, 2) - W(2, 0), W(1, 0) - W(0, 1));
  return make_vec6(w, t.translation_rate - w.cross(base.translation()));
}

double frobenius_distance(const Pose& E) {
  return (Mat4::Identity() - E.matrix()).norm();
}

double condition_number(const Pose& X) {
  Eigen::JacobiSVD<Mat4> svd(X.matrix());
  const auto& s = svd.singularValues();
  return s(0) / s(3);
}

}  // namespace lieobs

// Matrix Lie group primitives for SO(3), SE(3) and the translation group R^3.
//
// Conventions used throughout the library:
//  * se(3) coordinates are ordered (omega, v): three rotational generators
//    followed by three translational ones.
//  * A tangent vector at a pose X is stored by its coordinates xi in the
//    right-translated basis {e_j X}, i.e. the tangent vector is hat(xi) * X
//    in the 4x4 representation.
//  * Covectors at X are coordinate rows against the dual of that basis.
#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include <concepts>

namespace lieobs {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Row6 = Eigen::Matrix<double, 1, 6>;

/// Orthonormality and determinant tolerance for rotation matrices.
inline constexpr double kRotationTol = 1e-9;

inline Vec3 omega_part(const Vec6& xi) { return xi.head<3>(); }
inline Vec3 vel_part(const Vec6& xi) { return xi.tail<3>(); }
inline Vec6 make_vec6(const Vec3& omega, const Vec3& vel) {
  Vec6 out;
  out << omega, vel;
  return out;
}

Mat3 hat3(const Vec3& v);
/// Throws std::invalid_argument when ||S + S^T||_F >= 1e-9.
Vec3 vee3(const Mat3& S);

bool is_rotation(const Mat3& R, double tol = kRotationTol);
/// Nearest orthonormal matrix (polar projection).
Mat3 project_to_rotation(const Mat3& R);

Mat3 exp_so3(const Vec3& omega);
/// Throws std::domain_error when the rotation angle is within 1e-6 of pi.
Vec3 log_so3(const Mat3& R);

/// Rigid transform (R, p) with the semi-direct product law
/// (R, p)(S, q) = (RS, p + Rq).
class Pose {
 public:
  Pose() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}
  /// Throws std::invalid_argument if `rotation` is not in SO(3) within 1e-9.
  Pose(const Mat3& rotation, const Vec3& translation);

  static Pose identity() { return Pose(); }
  static Pose from_matrix(const Mat4& m);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  /// Phi(X): the 4x4 homogeneous matrix [[R, p], [0, 1]].
  Mat4 matrix() const;

  Pose operator*(const Pose& other) const;
  Pose inverse() const;

  /// Re-projects the rotation onto SO(3) when ||R^T R - I||_F > 1e-9.
  Pose renormalized() const;

 private:
  struct Unchecked {};
  Pose(const Mat3& rotation, const Vec3& translation, Unchecked)
      : rotation_(rotation), translation_(translation) {}

  Mat3 rotation_;
  Vec3 translation_;
};

inline Pose compose(const Pose& a, const Pose& b) { return a * b; }
inline Pose inverse(const Pose& a) { return a.inverse(); }

/// 4x4 matrix of the se(3) element with coordinates xi.
Mat4 hat6(const Vec6& xi);
/// Inverse of hat6; ignores the bottom row.
Vec6 vee6(const Mat4& m);

Pose exp_se3(const Vec6& xi);
/// Throws std::domain_error when the rotation angle is within 1e-6 of pi.
Vec6 log_se3(const Pose& X);

/// Lie bracket [a, b] in (omega, v) coordinates.
Vec6 bracket(const Vec6& a, const Vec6& b);

/// Inverse right-trivialised differential of exp, truncated after the
/// second-order commutator: u - [theta,u]/2 + [theta,[theta,u]]/12.
Vec6 dexp_inv(const Vec6& theta, const Vec6& u);

/// [[Ad_X]] = [[R, 0], [p_x R, R]] in the (omega, v) ordering.
Mat6 adjoint_matrix(const Pose& X);

/// Matrix of T_I L_X from {e} to the right-translated basis {e X}; it
/// coincides with the adjoint matrix.
Mat6 left_translation_matrix(const Pose& X);

/// A tangent vector at a pose written out in the semi-direct product form.
struct TangentIncrement {
  Mat3 rotation_rate;
  Vec3 translation_rate;
};

/// Tangent vector at a base pose with coordinates in the right-translated basis.
struct TangentAtPose {
  Pose base;
  Vec6 coeffs;
};

/// (w_omega_x R, w_omega_x p + w_v).
TangentIncrement vec6_to_tangent(const Vec6& w, const Pose& base);
/// Inverse of vec6_to_tangent.
Vec6 tangent_to_vec6(const TangentIncrement& t, const Pose& base);

/// d(E) = ||I - Phi(E)||_F.
double frobenius_distance(const Pose& E);

/// Ratio of extreme singular values of Phi(X).
double condition_number(const Pose& X);

// Group traits used by the generic error-dynamics code. Each model exposes
// an element type, algebra coordinates of fixed dimension, composition,
// inversion and the adjoint matrix.
template <class G>
concept MatrixLieGroup = requires(const typename G::Element& a,
                                  const typename G::Algebra& u) {
  { G::kDim } -> std::convertible_to<int>;
  { G::identity() } -> std::convertible_to<typename G::Element>;
  { G::compose(a, a) } -> std::convertible_to<typename G::Element>;
  { G::inverse(a) } -> std::convertible_to<typename G::Element>;
  { G::exp(u) } -> std::convertible_to<typename G::Element>;
  { G::adjoint(a) } -> std::convertible_to<typename G::AdjointMatrix>;
};

struct Se3Group {
  static constexpr int kDim = 6;
  using Element = Pose;
  using Algebra = Vec6;
  using AdjointMatrix = Mat6;
  static Pose identity() { return Pose::identity(); }
  static Pose compose(const Pose& a, const Pose& b) { return a * b; }
  static Pose inverse(const Pose& a) { return a.inverse(); }
  static Pose exp(const Vec6& u) { return exp_se3(u); }
  static Mat6 adjoint(const Pose& a) { return adjoint_matrix(a); }
};

struct So3Group {
  static constexpr int kDim = 3;
  using Element = Mat3;
  using Algebra = Vec3;
  using AdjointMatrix = Mat3;
  static Mat3 identity() { return Mat3::Identity(); }
  static Mat3 compose(const Mat3& a, const Mat3& b) { return a * b; }
  static Mat3 inverse(const Mat3& a) { return a.transpose(); }
  static Mat3 exp(const Vec3& u) { return exp_so3(u); }
  static Mat3 adjoint(const Mat3& a) { return a; }
};

/// Abelian group of translations of R^3; the adjoint is the identity map.
struct R3Group {
  static constexpr int kDim = 3;
  using Element = Vec3;
  using Algebra = Vec3;
  using AdjointMatrix = Mat3;
  static Vec3 identity() { return Vec3::Zero(); }
  static Vec3 compose(const Vec3& a, const Vec3& b) { return a + b; }
  static Vec3 inverse(const Vec3& a) { return -a; }
  static Vec3 exp(const Vec3& u) { return u; }
  static Mat3 adjoint(const Vec3&) { return Mat3::Identity(); }
};

static_assert(MatrixLieGroup<Se3Group>);
static_assert(MatrixLieGroup<So3Group>);
static_assert(MatrixLieGroup<R3Group>);

}  // namespace lieobs

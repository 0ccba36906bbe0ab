#include "lieobs/checks.hpp"
#include "lieobs/lie.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <numbers>

namespace lieobs {
namespace {

using testing::expm_series;
using testing::random_vec3;
using testing::random_vec6;

TEST(Hat3, VeeInvertsHat) {
  const Vec3 v(0.3, -1.2, 2.5);
  EXPECT_EQ(vee3(hat3(v)), v);
  EXPECT_TRUE(hat3(v).isApprox(-hat3(v).transpose()));
  EXPECT_NEAR((hat3(v) * Vec3(1, 2, 3) - v.cross(Vec3(1, 2, 3))).norm(), 0.0, 1e-15);
}

TEST(Hat3, VeeRejectsNonSkew) {
  Mat3 S = Mat3::Identity();
  EXPECT_THROW(vee3(S), std::invalid_argument);
}

TEST(So3, ExpMatchesSeries) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const Vec3 w = random_vec3(rng, 1.0);
    const Mat3 R = exp_so3(w);
    EXPECT_LT((R - expm_series<3>(hat3(w))).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_TRUE(is_rotation(R));
  }
  // Series branch for tiny angles.
  const Vec3 tiny(1e-9, -2e-9, 3e-9);
  EXPECT_LT((exp_so3(tiny) - expm_series<3>(hat3(tiny))).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(So3, LogRoundTrip) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 500; ++k) {
    Vec3 w = random_vec3(rng, 1.0);
    if (w.norm() > 3.0) w *= 3.0 / w.norm();
    EXPECT_LT((log_so3(exp_so3(w)) - w).norm(), 1e-10);
  }
  EXPECT_EQ(log_so3(Mat3::Identity()), Vec3::Zero());
}

TEST(So3, LogRejectsHalfTurn) {
  EXPECT_THROW(log_so3(exp_so3(Vec3(0, 0, std::numbers::pi))), std::domain_error);
}

TEST(Pose, RejectsNonRotation) {
  Mat3 R = Mat3::Identity();
  R(0, 0) = 1.0 + 1e-6;
  EXPECT_THROW(Pose(R, Vec3::Zero()), std::invalid_argument);
  EXPECT_THROW(Pose(-Mat3::Identity(), Vec3::Zero()), std::invalid_argument);
}

TEST(Pose, GroupLaw) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const Pose a = random_pose(rng, 3.0, 1.0);
    const Pose b = random_pose(rng, 3.0, 1.0);
    const Pose c = random_pose(rng, 3.0, 1.0);
    EXPECT_LT(((a * b).matrix() - a.matrix() * b.matrix()).norm(), 1e-14);
    EXPECT_LT((((a * b) * c).matrix() - (a * (b * c)).matrix()).norm(), 1e-13);
    EXPECT_LT(((a * a.inverse()).matrix() - Mat4::Identity()).norm(), 1e-14);
    EXPECT_LT((a.inverse().matrix() - a.matrix().inverse()).norm(), 1e-13);
  }
}

TEST(Pose, RepeatedCompositionStaysOrthonormal) {
  std::mt19937_64 rng(4);
  const Pose step = random_pose(rng, 0.3, 0.1);
  Pose X;
  for (int k = 0; k < 100000; ++k) X = (X * step).renormalized();
  EXPECT_LT((X.rotation().transpose() * X.rotation() - Mat3::Identity()).norm(), 1e-9);
  EXPECT_NEAR(X.rotation().determinant(), 1.0, 1e-9);
}

TEST(Pose, ProjectionIsNearestRotation) {
  std::mt19937_64 rng(5);
  const Mat3 R = exp_so3(random_vec3(rng));
  const Mat3 noisy = R + 1e-7 * Mat3::Random();
  const Mat3 P = project_to_rotation(noisy);
  EXPECT_TRUE(is_rotation(P, 1e-12));
  EXPECT_LT((P - R).norm(), 1e-6);
}

TEST(Se3, ExpMatchesSeries) {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 200; ++k) {
    const Vec6 xi = random_vec6(rng, 0.8);
    EXPECT_LT((exp_se3(xi).matrix() - expm_series<4>(hat6(xi))).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Se3, LogRoundTrip) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    Vec6 xi = random_vec6(rng, 1.0);
    if (xi.head<3>().norm() > 3.0) xi.head<3>() *= 3.0 / xi.head<3>().norm();
    EXPECT_LT((log_se3(exp_se3(xi)) - xi).norm(), 1e-9);
  }
}

TEST(Se3, HatVee) {
  const Vec6 xi = (Vec6() << 1, 2, 3, 4, 5, 6).finished();
  EXPECT_EQ(vee6(hat6(xi)), xi);
  EXPECT_EQ(hat6(xi).row(3), Eigen::RowVector4d::Zero());
}

TEST(Se3, AdjointConjugates) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 100; ++k) {
    const Pose X = random_pose(rng, 3.0, 2.0);
    const Vec6 xi = random_vec6(rng);
    const Mat4 conj = X.matrix() * hat6(xi) * X.inverse().matrix();
    EXPECT_LT((vee6(conj) - adjoint_matrix(X) * xi).norm(), 1e-12);
    EXPECT_EQ(left_translation_matrix(X), adjoint_matrix(X));
  }
}

TEST(Se3, AdjointIsHomomorphism) {
  std::mt19937_64 rng(9);
  const Pose a = random_pose(rng, 2.0, 1.0);
  const Pose b = random_pose(rng, 2.0, 1.0);
  EXPECT_LT((adjoint_matrix(a * b) - adjoint_matrix(a) * adjoint_matrix(b)).norm(), 1e-12);
  EXPECT_LT((adjoint_matrix(a.inverse()) - adjoint_matrix(a).inverse()).norm(), 1e-12);
}

TEST(Se3, BracketIsCommutator) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 50; ++k) {
    const Vec6 a = random_vec6(rng);
    const Vec6 b = random_vec6(rng);
    const Mat4 comm = hat6(a) * hat6(b) - hat6(b) * hat6(a);
    EXPECT_LT((bracket(a, b) - vee6(comm)).norm(), 1e-13);
  }
}

TEST(Se3, DexpInvSeries) {
  std::mt19937_64 rng(11);
  const Vec6 theta = random_vec6(rng, 0.1);
  const Vec6 u = random_vec6(rng);
  const Vec6 expected = u - 0.5 * bracket(theta, u) + bracket(theta, bracket(theta, u)) / 12.0;
  EXPECT_LT((dexp_inv(theta, u) - expected).norm(), 1e-15);
  // dexp_inv inverts the right-trivialised differential of exp to third order.
  const double h = 1e-6;
  const Mat4 dexp = (exp_se3(theta + h * u).matrix() - exp_se3(theta - h * u).matrix()) / (2 * h);
  const Vec6 right = vee6(dexp * exp_se3(theta).inverse().matrix());
  EXPECT_LT((dexp_inv(theta, right) - u).norm(), 1e-4 * u.norm());
}

TEST(Se3, TangentConversionRoundTrip) {
  std::mt19937_64 rng(12);
  const Pose X = random_pose(rng, 2.0, 1.0);
  const Vec6 w = random_vec6(rng);
  const TangentIncrement t = vec6_to_tangent(w, X);
  // The tangent vector is hat(w) X in the matrix representation.
  const Mat4 expected = hat6(w) * X.matrix();
  EXPECT_LT((t.rotation_rate - expected.topLeftCorner<3, 3>()).norm(), 1e-14);
  EXPECT_LT((t.translation_rate - expected.topRightCorner<3, 1>()).norm(), 1e-14);
  EXPECT_LT((tangent_to_vec6(t, X) - w).norm(), 1e-13);
}

TEST(Se3, DistanceAndCondition) {
  EXPECT_EQ(frobenius_distance(Pose::identity()), 0.0);
  const Pose shift(Mat3::Identity(), Vec3(3, 0, 0));
  EXPECT_NEAR(frobenius_distance(shift), 3.0, 1e-15);
  EXPECT_NEAR(condition_number(Pose::identity()), 1.0, 1e-14);
  const Eigen::JacobiSVD<Mat4> svd(shift.matrix());
  EXPECT_NEAR(condition_number(shift), svd.singularValues()(0) / svd.singularValues()(3), 1e-12);
  EXPECT_GT(condition_number(shift), 1.0);
}

TEST(GroupTraits, TranslationGroupIsAbelianWithTrivialAdjoint) {
  std::mt19937_64 rng(13);
  const Vec3 a = random_vec3(rng);
  const Vec3 b = random_vec3(rng);
  EXPECT_EQ(R3Group::compose(a, b), R3Group::compose(b, a));
  EXPECT_EQ(R3Group::adjoint(a), Mat3::Identity());
  EXPECT_EQ(R3Group::compose(a, R3Group::inverse(a)), R3Group::identity());
  EXPECT_NE(Se3Group::adjoint(random_pose(rng, 1.0, 1.0)), Mat6::Identity());
}

}  // namespace
}  // namespace lieobs

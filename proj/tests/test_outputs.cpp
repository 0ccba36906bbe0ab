#include "lieobs/checks.hpp"
#include "lieobs/outputs.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

namespace lieobs {
namespace {

using testing::random_vec3;

const std::vector<Vec3> kLandmarks = {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0), Vec3(0, 0, 2)};

TEST(Actions, LandmarkReading) {
  const Pose X(exp_so3(Vec3(0, 0, 0.5)), Vec3(1, 2, 3));
  const Vec3 y(4, 5, 6);
  EXPECT_LT((measure_landmark(X, y) - X.rotation().transpose() * (y - Vec3(1, 2, 3))).norm(), 1e-15);
  EXPECT_EQ(measure_landmark(Pose::identity(), y), y);
}

TEST(Actions, AreRightActions) {
  std::mt19937_64 rng(1);
  for (auto kind : {ActionKind::kLandmark, ActionKind::kDirection, ActionKind::kOffsetDirection}) {
    const Pose A = random_pose(rng, 2.0, 1.0);
    const Pose B = random_pose(rng, 2.0, 1.0);
    const Vec3 y = random_vec3(rng);
    EXPECT_LT((act(kind, A * B, y) - act(kind, B, act(kind, A, y))).norm(), 1e-13);
    EXPECT_EQ(act(kind, Pose::identity(), y), y);
  }
}

TEST(Actions, GeneratorMatchesFiniteDifferences) {
  std::mt19937_64 rng(2);
  for (auto kind : {ActionKind::kLandmark, ActionKind::kDirection, ActionKind::kOffsetDirection}) {
    const Vec3 y = random_vec3(rng);
    Mat36 fd;
    const double h = 1e-6;
    for (int j = 0; j < 6; ++j) {
      const Vec6 e = Vec6::Unit(j) * h;
      fd.col(j) = (act(kind, exp_se3(e).inverse(), y) - act(kind, exp_se3(-e).inverse(), y)) / (2 * h);
    }
    EXPECT_LT((fd - action_generator(kind, y)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(OutputSet, RejectsBadWeights) {
  EXPECT_THROW(make_landmark_set(kLandmarks, 0.0), std::invalid_argument);
  EXPECT_THROW(make_landmark_set(kLandmarks, std::vector<double>{1, 1}), std::invalid_argument);
  EXPECT_THROW(make_landmark_set({}, 1.0), std::invalid_argument);
}

TEST(ZTransform, MatchesDirectionActions) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd A = Eigen::MatrixXd::Random(3, 3) + 3.0 * Eigen::MatrixXd::Identity(3, 3);
  const DirectionOutputSet set = make_direction_set(kLandmarks, A, {1, 1, 1, 1});
  for (int k = 0; k < 20; ++k) {
    const Pose X = random_pose(rng, 3.0, 1.0);
    const Measurement y = measure(X, make_landmark_set(kLandmarks));
    const Measurement z = z_transform(y, A);
    const Measurement expected = measure(X, set.outputs);
    for (std::size_t j = 0; j < z.values.size(); ++j) {
      EXPECT_LT((z.values[j] - expected.values[j]).norm(), 1e-13);
    }
  }
  EXPECT_EQ(set.outputs.kinds.back(), ActionKind::kOffsetDirection);
}

TEST(ZTransform, IdentityCoefficientsGiveDifferences) {
  const std::vector<Vec3> z = z_transform(kLandmarks, Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(z[0], Vec3(2, 0, 0));
  EXPECT_EQ(z[1], Vec3(-2, 2, 0));
  EXPECT_EQ(z[2], Vec3(0, -2, 2));
  EXPECT_LT((z[3] + Vec3(0.5, 0.5, 0.5)).norm(), 1e-15);
}

TEST(ZTransform, RejectsLossyOrMisshapenCoefficients) {
  Eigen::MatrixXd singular = Eigen::MatrixXd::Identity(3, 3);
  singular(2, 2) = 0.0;
  EXPECT_THROW(z_transform(kLandmarks, singular), std::invalid_argument);
  EXPECT_THROW(z_transform(kLandmarks, Eigen::MatrixXd::Identity(2, 2)), std::invalid_argument);
  EXPECT_THROW(z_transform({Vec3(1, 0, 0)}, Eigen::MatrixXd(0, 0)), std::invalid_argument);
}

TEST(Observability, Landmarks) {
  EXPECT_TRUE(check_observability_landmarks(kLandmarks).pass);
  EXPECT_TRUE(check_observability_landmarks({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}).pass);
  const auto line = check_observability_landmarks({Vec3(0, 0, 0), Vec3(1, 1, 1), Vec3(3, 3, 3)});
  EXPECT_FALSE(line.pass);
  EXPECT_FALSE(line.diagnostic.empty());
  EXPECT_FALSE(check_observability_landmarks({Vec3(0, 0, 0), Vec3(1, 0, 0)}).pass);
  // Nearly collinear, above the scaled threshold.
  EXPECT_TRUE(check_observability_landmarks({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 1e-6, 0)}).pass);
}

TEST(Observability, Directions) {
  EXPECT_TRUE(check_observability_directions({Vec3(1, 0, 0), Vec3(0, 1, 0)}).pass);
  EXPECT_FALSE(check_observability_directions({Vec3(1, 0, 0), Vec3(-2, 0, 0)}).pass);
  EXPECT_FALSE(check_observability_directions({Vec3(1, 0, 0)}).pass);
}

TEST(Stabilizer, KernelDimensions) {
  EXPECT_EQ(stabilizer_kernel_dimension(make_landmark_set(kLandmarks)), 0);
  // Collinear landmarks leave rotation about the common line free.
  EXPECT_EQ(stabilizer_kernel_dimension(
                make_landmark_set({Vec3(0, 0, 0), Vec3(1, 1, 1), Vec3(2, 2, 2)})),
            1);
  EXPECT_EQ(stabilizer_kernel_dimension(make_landmark_set({Vec3(1, 2, 3)})), 3);
  // Pure directions never fix the translation.
  OutputSet dirs;
  dirs.references = {Vec3(1, 0, 0), Vec3(0, 1, 0)};
  dirs.weights = {1, 1};
  dirs.kinds = {ActionKind::kDirection, ActionKind::kDirection};
  EXPECT_EQ(stabilizer_kernel_dimension(dirs), 3);
  const DirectionOutputSet z = make_direction_set(kLandmarks, Eigen::MatrixXd::Identity(3, 3), {1, 1, 1, 1});
  EXPECT_EQ(stabilizer_kernel_dimension(z.outputs), 0);
}

}  // namespace
}  // namespace lieobs

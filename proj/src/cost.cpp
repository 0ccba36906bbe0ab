#include "lieobs/cost.hpp"

#include <Eigen/Eigenvalues>

#include <random>
#include <sstream>
#include <stdexcept>

namespace lieobs {

OutputPenalty OutputPenalty::squared_euclidean() {
  return {[](const Vec3& r) { return 0.5 * r.squaredNorm(); },
          [](const Vec3& r) { return r; },
          [](const Vec3&) { return Mat3::Identity(); }};
}

InvariantCost::InvariantCost(OutputSet outputs, OutputPenalty penalty, double collinearity_tol)
    : outputs_(std::move(outputs)), penalty_(std::move(penalty)) {
  outputs_.validate();
  observability_ = check_observability(outputs_, collinearity_tol);
}

Measurement InvariantCost::reference_measurement() const {
  return {outputs_.references, 0.0};
}

InvariantCost InvariantCost::scaled(double factor) const {
  InvariantCost out = *this;
  for (auto& k : out.outputs_.weights) k *= factor;
  out.outputs_.validate();
  return out;
}

namespace {

void check_cardinality(const Measurement& y, const InvariantCost& cost) {
  if (y.values.size() != cost.outputs().size()) {
    std::ostringstream msg;
    msg << "measurement has " << y.values.size() << " outputs, cost expects "
        << cost.outputs().size();
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double phi_eval(const Pose& xhat, const Measurement& y, const InvariantCost& cost) {
  check_cardinality(y, cost);
  const OutputSet& out = cost.outputs();
  const Pose xhat_inv = xhat.inverse();
  double total = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec3 r = act(out.kinds[i], xhat_inv, y.values[i]) - out.references[i];
    total += out.weights[i] * cost.penalty().value(r);
  }
  return total;
}

Covector d1_phi_row(const Pose& xhat, const Measurement& y, const InvariantCost& cost) {
  check_cardinality(y, cost);
  const OutputSet& out = cost.outputs();
  const Pose xhat_inv = xhat.inverse();
  Row6 row = Row6::Zero();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec3 transported = act(out.kinds[i], xhat_inv, y.values[i]);
    const Vec3 r = transported - out.references[i];
    row += out.weights[i] * cost.penalty().gradient(r).transpose() *
           action_generator(out.kinds[i], transported);
  }
  return {xhat, row};
}

Covector d1_phi_fd(const Pose& xhat, const Measurement& y, const InvariantCost& cost, double h) {
  if (!(h >= 1e-8 && h <= 1e-4)) {
    throw std::invalid_argument("d1_phi_fd: step must lie in [1e-8, 1e-4]");
  }
  Row6 row;
  for (int j = 0; j < 6; ++j) {
    const Vec6 e = Vec6::Unit(j) * h;
    const double plus = phi_eval(exp_se3(e) * xhat, y, cost);
    const double minus = phi_eval(exp_se3(-e) * xhat, y, cost);
    row(j) = (plus - minus) / (2.0 * h);
  }
  return {xhat, row};
}

double transport_residual(const Pose& X, const Pose& xhat, const Measurement& y,
                    const InvariantCost& cost) {
  const Pose E = xhat * X.inverse();
  const Row6 at_estimate = d1_phi_row(xhat, y, cost).row;
  const Row6 at_error = d1_phi_row(E, cost.reference_measurement(), cost).row;
  return (at_estimate - at_error).cwiseAbs().maxCoeff();
}

HessianReport hessian_at_identity(const InvariantCost& cost, double h) {
  const Measurement ref = cost.reference_measurement();
  auto g = [&](const Vec6& eps) { return phi_eval(exp_se3(eps), ref, cost); };
  auto partial = [&](const Vec6& at, int k) {
    const Vec6 e = Vec6::Unit(k) * h;
    return (g(at + e) - g(at - e)) / (2.0 * h);
  };
  Mat6 H;
  for (int j = 0; j < 6; ++j) {
    const Vec6 e = Vec6::Unit(j) * h;
    for (int k = 0; k < 6; ++k) {
      H(j, k) = (partial(e, k) - partial(-e, k)) / (2.0 * h);
    }
  }
  HessianReport report;
  report.asymmetry = (H - H.transpose()).norm();
  report.hessian = 0.5 * (H + H.transpose());
  Eigen::SelfAdjointEigenSolver<Mat6> eig(report.hessian, Eigen::EigenvaluesOnly);
  report.eigenvalues = eig.eigenvalues();
  return report;
}

Mat6 hessian_at_identity_analytic(const InvariantCost& cost) {
  const OutputSet& out = cost.outputs();
  Mat6 H = Mat6::Zero();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Mat36 J = action_generator(out.kinds[i], out.references[i]);
    H += out.weights[i] * J.transpose() * cost.penalty().hessian(Vec3::Zero()) * J;
  }
  return H;
}

int hessian_kernel_dimension(const HessianReport& report, double rel_tol) {
  const double lmax = report.eigenvalues.cwiseAbs().maxCoeff();
  int kernel = 0;
  for (int j = 0; j < 6; ++j) {
    if (std::abs(report.eigenvalues(j)) < rel_tol * lmax) ++kernel;
  }
  return kernel;
}

double positive_definite_radius(const InvariantCost& cost, const std::vector<double>& radii,
                                int samples_per_radius, std::uint64_t seed) {
  const Measurement ref = cost.reference_measurement();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double best = 0.0;
  for (double r : radii) {
    for (int s = 0; s < samples_per_radius; ++s) {
      Vec6 dir;
      for (int j = 0; j < 6; ++j) dir(j) = normal(rng);
      const Vec6 eps = r * dir.normalized();
      if (!(phi_eval(exp_se3(eps), ref, cost) > 0.0)) return best;
    }
    best = r;
  }
  return best;
}

}  // namespace lieobs

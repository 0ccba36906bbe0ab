#include "lieobs/analysis.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lieobs {

ErrorState error(const Pose& X, const Pose& xhat, const Vec6& b, const Vec6& bhat) {
  return {xhat * X.inverse(), bhat - b};
}

double compound_distance(const ErrorState& err) {
  const double d = frobenius_distance(err.E);
  return std::sqrt(d * d + err.btilde.squaredNorm());
}

double lyapunov(const ErrorState& err, const GainGamma& gamma, const InvariantCost& cost) {
  if (!(gamma.gamma_omega > 0.0) || !(gamma.gamma_v > 0.0)) {
    throw std::invalid_argument("lyapunov: Gamma must be positive definite");
  }
  const double bias = omega_part(err.btilde).squaredNorm() / gamma.gamma_omega +
                      vel_part(err.btilde).squaredNorm() / gamma.gamma_v;
  return phi_eval(err.E, cost.reference_measurement(), cost) + 0.5 * bias;
}

double lyapunov_dot_analytic(const Pose& xhat, const Measurement& y, const GainK& K,
                             const GainContext& ctx, const InvariantCost& cost) {
  const Row6 row = d1_phi_row(xhat, y, cost).row;
  return -(row * K.matrix(ctx) * row.transpose())(0, 0);
}

ErrorRhs error_dynamics_rhs(const ErrorState& err, const Pose& X, const Gains& gains,
                            const InvariantCost& cost, const Vec6& u_y, const Vec6& b) {
  const GainContext ctx{err.E * X, u_y, b + err.btilde, 0.0};
  const Row6 row = d1_phi_row(err.E, cost.reference_measurement(), cost).row;
  const Mat6 AdE = adjoint_matrix(err.E);
  const Mat6 AdX = adjoint_matrix(X);
  ErrorRhs out;
  out.zeta = -gains.K.matrix(ctx) * row.transpose() - AdE * AdX * err.btilde;
  out.btilde_dot = gains.gamma.matrix() * AdX.transpose() * AdE.transpose() * row.transpose();
  return out;
}

R3ErrorRhs error_dynamics_rhs_r3(const Vec3& e, const Vec3& btilde, const Vec3& x,
                                 const Gains& gains, const OutputSet& landmarks) {
  // Observer xhat' = u_y - bhat - k_v row, bhat' = gamma_v row, evaluated on
  // the readings produced by x; e' = xhat' - x'.
  const Vec3 xhat = R3Group::compose(e, x);
  Vec3 row = Vec3::Zero();
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    const Vec3 reading = landmarks.references[i] - x;
    row += landmarks.weights[i] * (reading + xhat - landmarks.references[i]);
  }
  R3ErrorRhs out;
  out.e_dot = -R3Group::adjoint(x) * btilde - gains.K.k_v() * row;
  out.btilde_dot = gains.gamma.gamma_v * R3Group::adjoint(x).transpose() * row;
  return out;
}

GroupKind parse_group(const std::string& name) {
  if (name == "se3") return GroupKind::kSe3;
  if (name == "r3") return GroupKind::kR3;
  throw std::invalid_argument("unknown group '" + name + "' (expected se3 or r3)");
}

AutonomyReport autonomy_probe(GroupKind group, const ErrorState& err,
                              const std::vector<Pose>& samples, const Gains& gains,
                              const InvariantCost& cost) {
  if (samples.size() < 2) throw std::invalid_argument("autonomy_probe: need two or more samples");
  AutonomyReport report;
  if (group == GroupKind::kR3) {
    std::vector<R3ErrorRhs> rhs;
    for (const Pose& X : samples) {
      rhs.push_back(error_dynamics_rhs_r3(err.E.translation(), vel_part(err.btilde),
                                          X.translation(), gains, cost.outputs()));
    }
    for (std::size_t a = 0; a < rhs.size(); ++a) {
      for (std::size_t c = a + 1; c < rhs.size(); ++c) {
        report.group_discrepancy =
            std::max(report.group_discrepancy, (rhs[a].e_dot - rhs[c].e_dot).norm());
        report.bias_discrepancy =
            std::max(report.bias_discrepancy, (rhs[a].btilde_dot - rhs[c].btilde_dot).norm());
      }
    }
    return report;
  }
  std::vector<ErrorRhs> rhs;
  for (const Pose& X : samples) rhs.push_back(error_dynamics_rhs(err, X, gains, cost));
  for (std::size_t a = 0; a < rhs.size(); ++a) {
    for (std::size_t c = a + 1; c < rhs.size(); ++c) {
      report.group_discrepancy =
          std::max(report.group_discrepancy, (rhs[a].zeta - rhs[c].zeta).norm());
      report.bias_discrepancy =
          std::max(report.bias_discrepancy, (rhs[a].btilde_dot - rhs[c].btilde_dot).norm());
    }
  }
  return report;
}

double LinearizedSystem::max_real_eigenvalue() const {
  double m = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < 12; ++j) m = std::max(m, eigenvalues(j).real());
  return m;
}

namespace {

// Upper factor L with Gamma = L^T L.
Mat6 cholesky_upper(const Mat6& Gamma) {
  Eigen::LLT<Mat6> llt(Gamma);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("Cholesky factorisation failed: Gamma is not SPD");
  }
  return llt.matrixL().transpose();
}

}  // namespace

Eigen::Matrix<double, 12, 12> assemble_block(const Mat6& K, const Mat6& H, const Mat6& Ad,
                                             const Mat6& Gamma) {
  Eigen::Matrix<double, 12, 12> block = Eigen::Matrix<double, 12, 12>::Zero();
  block.topLeftCorner<6, 6>() = -K * H;
  block.topRightCorner<6, 6>() = -Ad;
  block.bottomLeftCorner<6, 6>() = Gamma * Ad.transpose() * H;
  return block;
}

LinearizedSystem linearize(const Pose& X, const Gains& gains, const InvariantCost& cost,
                           const Vec6& u_y, const Vec6& b) {
  LinearizedSystem sys;
  sys.H = hessian_at_identity(cost).hessian;
  sys.K = gains.K.matrix(GainContext{X, u_y, b, 0.0});
  sys.Ad = adjoint_matrix(X);
  sys.Gamma = gains.gamma.matrix();
  sys.L = cholesky_upper(sys.Gamma);

  sys.block = assemble_block(sys.K, sys.H, sys.Ad, sys.Gamma);

  const Mat6 Linv = sys.L.inverse();
  sys.A = -sys.L * sys.K * sys.H * Linv;
  sys.B = -sys.L * sys.Ad.transpose() * sys.L.transpose();
  sys.P = Linv.transpose() * sys.H * Linv;
  const Mat6 HL = sys.H * Linv;
  sys.Q = HL.transpose() * (sys.K + sys.K.transpose()) * HL;

  Eigen::EigenSolver<Eigen::Matrix<double, 12, 12>> eig(sys.block, false);
  sys.eigenvalues = eig.eigenvalues();
  return sys;
}

Eigen::Matrix<double, 12, 12> error_dynamics_jacobian(const Pose& X, const Gains& gains,
                                                      const InvariantCost& cost,
                                                      const Vec6& u_y, const Vec6& b,
                                                      double h) {
  using Vec12 = Eigen::Matrix<double, 12, 1>;
  auto f = [&](const Vec12& s) {
    const ErrorState err{exp_se3(s.head<6>()), s.tail<6>()};
    const ErrorRhs r = error_dynamics_rhs(err, X, gains, cost, u_y, b);
    Vec12 out;
    out << r.zeta, r.btilde_dot;
    return out;
  };
  Eigen::Matrix<double, 12, 12> J;
  for (int j = 0; j < 12; ++j) {
    const Vec12 e = Vec12::Unit(j) * h;
    J.col(j) = (f(e) - f(-e)) / (2.0 * h);
  }
  return J;
}

PeReport pe_check(const std::vector<Pose>& trajectory, double dt, const GainGamma& gamma) {
  if (trajectory.size() < 2) throw std::invalid_argument("pe_check: need two or more samples");
  if (!(dt > 0.0)) throw std::invalid_argument("pe_check: dt must be positive");
  const Mat6 Gamma = gamma.matrix();
  const Mat6 L = cholesky_upper(Gamma);
  Mat6 integral = Mat6::Zero();
  double c0 = 1.0;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const Mat6 Ad = adjoint_matrix(trajectory[k]);
    const Mat6 B = -L * Ad.transpose() * L.transpose();
    const double w = (k == 0 || k + 1 == trajectory.size()) ? 0.5 : 1.0;
    integral += w * dt * B * B.transpose();
    c0 = std::max(c0, condition_number(trajectory[k]));
  }
  PeReport report;
  report.window = dt * static_cast<double>(trajectory.size() - 1);
  Eigen::SelfAdjointEigenSolver<Mat6> eig(0.5 * (integral + integral.transpose()),
                                          Eigen::EigenvaluesOnly);
  report.min_eigenvalue = eig.eigenvalues()(0);
  const double sigma_L = Eigen::JacobiSVD<Mat6>(L).singularValues()(5);
  const double sigma_G = Eigen::JacobiSVD<Mat6>(Gamma).singularValues()(5);
  report.max_condition = c0;
  report.c0_bar = sigma_L * sigma_L * sigma_G / (c0 * c0);
  report.lower_bound = report.c0_bar * report.window;
  return report;
}

RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& l, double floor) {
  if (t.size() != l.size()) throw std::invalid_argument("fit_rate: t and l differ in length");
  if (l.size() < 50) {
    throw std::invalid_argument("fit_rate: need at least 50 samples, got " +
                                std::to_string(l.size()));
  }
  for (std::size_t k = 0; k < l.size(); ++k) {
    if (!(l[k] > 0.0)) {
      std::ostringstream msg;
      msg << "fit_rate: non-positive sample " << l[k] << " at index " << k;
      throw std::invalid_argument(msg.str());
    }
  }
  // Fit window: samples before the trace first reaches the floor, tail half.
  std::size_t end = 0;
  while (end < l.size() && l[end] > floor) ++end;
  if (end < 10) throw std::runtime_error("fit_rate: fewer than 10 samples above the floor");
  const std::size_t begin = end / 2;

  const double n = static_cast<double>(end - begin);
  double mt = 0.0, my = 0.0;
  for (std::size_t k = begin; k < end; ++k) {
    mt += t[k];
    my += std::log(l[k]);
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t k = begin; k < end; ++k) {
    const double dt = t[k] - mt;
    const double dy = std::log(l[k]) - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  RateFit fit;
  fit.used = end - begin;
  fit.slope = sty / stt;
  fit.rate = -fit.slope;
  fit.r_squared = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
  return fit;
}

}  // namespace lieobs

#include "lieobs/checks.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace lieobs {

Pose random_pose(std::mt19937_64& rng, double max_angle, double translation_std) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const Vec3 axis = Vec3(normal(rng), normal(rng), normal(rng)).normalized();
  const double angle = max_angle * uniform(rng);
  const Vec3 p(normal(rng), normal(rng), normal(rng));
  return Pose(exp_so3(angle * axis), translation_std * p);
}

namespace {

CheckLine upper(std::string name, double measured, double limit, std::string detail = {}) {
  return {std::move(name), measured < limit, measured, limit, std::move(detail)};
}

CheckLine lower(std::string name, double measured, double limit, std::string detail = {}) {
  return {std::move(name), measured > limit, measured, limit, std::move(detail)};
}

Vec6 random_vec6(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal;
  Vec6 v;
  for (int j = 0; j < 6; ++j) v(j) = scale * normal(rng);
  return v;
}

// Largest entry difference relative to the larger of 1 and the entry scale.
double scaled_difference(const Vec6& a, const Vec6& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff());
}

}  // namespace

std::vector<CheckLine> scenario_checks(const Scenario& s) {
  std::vector<CheckLine> out;
  const InvariantCost cost = s.cost();
  out.push_back({"observability", cost.observable(), cost.observable() ? 1.0 : 0.0, 1.0,
                 cost.observability().diagnostic});

  const Gains g = s.observer_gains();
  try {
    const GainReport rep = validate_gains(g.K, g.gamma);
    std::ostringstream d;
    d << "k in [" << rep.k_lower << ", " << rep.k_upper << "], gamma in [" << rep.gamma_lower
      << ", " << rep.gamma_upper << "] over " << rep.samples << " samples";
    out.push_back(lower("gain symmetric part min eigenvalue", rep.k_lower, 0.0, d.str()));
  } catch (const std::invalid_argument& e) {
    out.push_back({"gain symmetric part min eigenvalue", false, 0.0, 0.0, e.what()});
  }

  const HessianReport H = hessian_at_identity(cost);
  out.push_back(lower("Hessian min eigenvalue", H.eigenvalues(0), 0.0));
  const int kh = hessian_kernel_dimension(H);
  const int ks = stabilizer_kernel_dimension(cost.outputs());
  out.push_back({"Hessian kernel equals stabilizer kernel", kh == ks, double(kh), double(ks),
                 "Hessian kernel " + std::to_string(kh) + ", stabilizer kernel " +
                     std::to_string(ks)});
  const double analytic = (H.hessian - hessian_at_identity_analytic(cost)).cwiseAbs().maxCoeff();
  out.push_back(upper("Hessian finite differences vs analytic", analytic, 1e-6));
  return out;
}

std::vector<CheckLine> lemma_checks(const Scenario& s, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const InvariantCost cost = s.cost();
  const Gains g = s.observer_gains();
  double lemma = 0.0, shift = 0.0, grad = 0.0, two_path = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Pose X = random_pose(rng, 0.95 * std::numbers::pi, 1.0);
    const Pose xhat = random_pose(rng, 0.95 * std::numbers::pi, 1.0);
    const Pose Z = random_pose(rng, 0.95 * std::numbers::pi, 1.0);
    const Measurement y = measure(X, cost.outputs());
    lemma = std::max(lemma, transport_residual(X, xhat, y, cost));

    // phi(Xhat Z, h(Z, y)) = phi(Xhat, y) and the error is unchanged.
    const Measurement yz = measure(X * Z, cost.outputs());
    const double phi = phi_eval(xhat, y, cost);
    const double dphi = std::abs(phi_eval(xhat * Z, yz, cost) - phi) / std::max(1.0, phi);
    const ErrorState e0 = error(X, xhat, Vec6::Zero(), Vec6::Zero());
    const ErrorState e1 = error(X * Z, xhat * Z, Vec6::Zero(), Vec6::Zero());
    const double dE = (e0.E.matrix() - e1.E.matrix()).cwiseAbs().maxCoeff();
    shift = std::max({shift, dphi, dE});

    const Row6 a = d1_phi_row(xhat, y, cost).row;
    const Row6 f = d1_phi_fd(xhat, y, cost).row;
    grad = std::max(grad, (a - f).norm() / std::max(a.norm(), 1e-3));

    const ObserverState st{xhat, random_vec6(rng, 0.2)};
    const Vec6 u_y = random_vec6(rng, 1.0);
    const ObserverRhs generic = observer_generic_rhs(st, u_y, y, g, cost);
    const ObserverRhs closed =
        (s.observer == ObserverKind::kMd ? observer_md_rhs(st, u_y, y, g, cost)
                                         : observer_vasconcelos_rhs(st, u_y, y, g, cost))
            .as_coordinates(xhat);
    two_path = std::max({two_path, scaled_difference(generic.xi, closed.xi),
                         scaled_difference(generic.bhat_dot, closed.bhat_dot)});
  }
  const std::string n = std::to_string(samples) + " random states";
  return {upper("error-coordinate differential identity", lemma, 1e-9, n),
          upper("right-shift invariance", shift, 1e-12, n),
          upper("analytic vs finite-difference differential (relative)", grad, 1e-6, n),
          upper("closed form vs generic assembly (scaled)", two_path, 1e-12, n)};
}

std::vector<CheckLine> autonomy_checks(GroupKind group, const Scenario& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Scenario md = s;
  md.observer = ObserverKind::kMd;
  md.z_mode = false;
  const InvariantCost cost = md.cost();
  const Gains g = md.observer_gains();

  const Pose E = random_pose(rng, 0.3, 0.2);
  const Vec6 btilde = make_vec6(Vec3(0.02, -0.01, 0.03), Vec3(0.1, -0.05, 0.07));
  std::vector<Pose> samples;
  const Mat3 quarter = exp_so3(Vec3(0.0, 0.0, std::numbers::pi / 2));
  for (int k = 0; k < 4; ++k) {
    const Pose X = random_pose(rng, std::numbers::pi * 0.9, 1.0);
    samples.push_back(X);
    samples.push_back(Pose(quarter, Vec3::Zero()) * X);
  }
  if (group == GroupKind::kR3) {
    const AutonomyReport rep = autonomy_probe(group, {E, btilde}, samples, g, cost);
    return {upper("translation group discrepancy", rep.total(), 1e-12,
                  "state-independent error dynamics")};
  }
  const AutonomyReport with_bias = autonomy_probe(group, {E, btilde}, samples, g, cost);
  double min_pair = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < samples.size(); k += 2) {
    const AutonomyReport pair =
        autonomy_probe(group, {E, btilde}, {samples[k], samples[k + 1]}, g, cost);
    min_pair = std::min(min_pair, pair.total());
  }
  const AutonomyReport no_bias = autonomy_probe(group, {E, Vec6::Zero()}, samples, g, cost);
  std::ostringstream d;
  d << "bias-free bias-estimator discrepancy " << no_bias.bias_discrepancy
    << " (depends on X through Ad_X^T)";
  return {lower("SE(3) discrepancy over quarter-turn pairs / |btilde|",
                min_pair / btilde.norm(), 0.1),
          lower("SE(3) overall discrepancy / |btilde|", with_bias.total() / btilde.norm(), 0.1),
          upper("SE(3) group-error discrepancy with btilde = 0", no_bias.group_discrepancy, 1e-10,
                d.str())};
}

std::vector<CheckLine> linearize_checks(const Scenario& s, double window) {
  std::vector<CheckLine> out;
  const InvariantCost cost = s.cost();
  const Gains g = s.observer_gains();
  Scenario sc = s;
  sc.noise_std = 0.0;
  const Truth truth = generate_truth(sc);

  double jac = 0.0, max_re = -std::numeric_limits<double>::infinity(), asym = 0.0;
  double q_min = std::numeric_limits<double>::infinity(), pe_margin = std::numeric_limits<double>::infinity();
  double pe_min = 0.0, pe_bound = 0.0;
  int windows = 0;
  const auto per_window = static_cast<std::size_t>(std::llround(window / truth.sample_dt));
  const auto every = static_cast<std::size_t>(std::llround(5.0 / truth.sample_dt));
  for (std::size_t k = 0; k < truth.poses.size(); k += every) {
    const Pose& X = truth.poses[k];
    const Vec6 u_y = truth.velocity[k] + s.bias;
    const LinearizedSystem L = linearize(X, g, cost, u_y, s.bias);
    const auto J = error_dynamics_jacobian(X, g, cost, u_y, s.bias);
    jac = std::max(jac, (J - L.block).cwiseAbs().maxCoeff());
    max_re = std::max(max_re, L.max_real_eigenvalue());
    asym = std::max(asym, (L.P - L.P.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Mat6> q(0.5 * (L.Q + L.Q.transpose()), Eigen::EigenvaluesOnly);
    q_min = std::min(q_min, q.eigenvalues()(0));

    if (k + per_window < truth.poses.size()) {
      std::vector<Pose> win(truth.poses.begin() + static_cast<std::ptrdiff_t>(k),
                            truth.poses.begin() + static_cast<std::ptrdiff_t>(k + per_window + 1));
      const PeReport pe = pe_check(win, truth.sample_dt, g.gamma);
      if (pe.min_eigenvalue - pe.lower_bound < pe_margin) {
        pe_margin = pe.min_eigenvalue - pe.lower_bound;
        pe_min = pe.min_eigenvalue;
        pe_bound = pe.lower_bound;
      }
      ++windows;
    }
  }
  out.push_back(upper("block matrix vs numeric Jacobian at (I, 0)", jac, 1e-5));
  out.push_back(upper("largest real part of block eigenvalues", max_re, 0.0));
  out.push_back(upper("P asymmetry", asym, 1e-12));
  out.push_back(lower("Q min eigenvalue", q_min, 0.0));
  std::ostringstream d;
  d << windows << " windows of " << window << " s; tightest: min eig " << pe_min << ", bound "
    << pe_bound;
  out.push_back(lower("PE integral min eigenvalue minus bound", pe_margin, -1e-9, d.str()));

  const std::vector<Pose> still(static_cast<std::size_t>(1001), Pose::identity());
  const PeReport id = pe_check(still, window / 1000.0, g.gamma);
  const double gmax = std::max(g.gamma.gamma_omega, g.gamma.gamma_v);
  const double gmin = std::min(g.gamma.gamma_omega, g.gamma.gamma_v);
  out.push_back(upper("PE integral at X = I vs gamma^2 T", std::abs(id.min_eigenvalue - gmin * gmin * window), 1e-12,
                      "gamma range [" + std::to_string(gmin) + ", " + std::to_string(gmax) + "]"));
  return out;
}

std::vector<CheckLine> sweep_checks(const SweepReport& report) {
  double worst_r2 = 1.0;
  for (const auto& e : report.entries) worst_r2 = std::min(worst_r2, e.r_squared);
  const double total = static_cast<double>(report.entries.size());
  return {lower("converged runs", report.converged, total - 0.5,
                std::to_string(report.converged) + " of " + std::to_string(report.entries.size())),
          lower("worst r^2 of log-distance fit", worst_r2, 0.98),
          upper("max rate / min rate", report.spread(), 3.0,
                "rates in [" + std::to_string(report.min_rate) + ", " +
                    std::to_string(report.max_rate) + "] 1/s")};
}

bool print_checks(std::ostream& out, const std::vector<CheckLine>& lines) {
  bool ok = true;
  for (const auto& l : lines) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s  %-55s measured %.6g  limit %.3g", l.pass ? "PASS" : "FAIL",
                  l.name.c_str(), l.measured, l.limit);
    out << buf;
    if (!l.detail.empty()) out << "  (" << l.detail << ")";
    out << '\n';
    ok = ok && l.pass;
  }
  return ok;
}

}  // namespace lieobs

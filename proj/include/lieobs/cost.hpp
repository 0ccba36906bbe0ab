// Right-invariant costs lifted from per-output penalties, their differential
// in right-translated coordinates, and the Hessian at the identity.
#pragma once

#include "lieobs/lie.hpp"
#include "lieobs/outputs.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace lieobs {

/// Penalty f(r) on the residual r = act(Xhat^{-1}, y_i) - y_ref_i. The
/// per-output cost is k_i f(r). It must vanish with zero gradient at r = 0.
struct OutputPenalty {
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;
  std::function<Mat3(const Vec3&)> hessian;

  /// f(r) = |r|^2 / 2.
  static OutputPenalty squared_euclidean();
};

class InvariantCost {
 public:
  explicit InvariantCost(OutputSet outputs,
                         OutputPenalty penalty = OutputPenalty::squared_euclidean(),
                         double collinearity_tol = kCollinearityTol);

  const OutputSet& outputs() const { return outputs_; }
  const OutputPenalty& penalty() const { return penalty_; }
  const ObservabilityReport& observability() const { return observability_; }
  bool observable() const { return observability_.pass; }

  /// The measurement produced by the identity pose, i.e. the references.
  Measurement reference_measurement() const;

  /// Same cost with every weight multiplied by `factor`.
  InvariantCost scaled(double factor) const;

 private:
  OutputSet outputs_;
  OutputPenalty penalty_;
  ObservabilityReport observability_;
};

/// Differential of the cost at `base`, as a row against {(e Xhat)^*}.
struct Covector {
  Pose base;
  Row6 row;
};

/// Throws std::invalid_argument on a cardinality mismatch.
double phi_eval(const Pose& xhat, const Measurement& y, const InvariantCost& cost);

/// Analytic differential: sum_i k_i grad f(r_i)^T J_i(act(Xhat^{-1}, y_i)).
/// For landmarks with the squared penalty this is
/// sum_i k_i [y_ref_i^T (Rhat y_i + phat)_x, alpha_i^T].
Covector d1_phi_row(const Pose& xhat, const Measurement& y, const InvariantCost& cost);

/// Central differences along exp(+-h e_j) Xhat. Throws for h outside [1e-8, 1e-4].
Covector d1_phi_fd(const Pose& xhat, const Measurement& y, const InvariantCost& cost,
                   double h = 1e-6);

/// max |row(Xhat, y) - row(E, y_ref)| with E = Xhat X^{-1}.
double transport_residual(const Pose& X, const Pose& xhat, const Measurement& y,
                    const InvariantCost& cost);

struct HessianReport {
  Mat6 hessian;        // symmetrised
  Vec6 eigenvalues;    // ascending
  double asymmetry;    // ||H - H^T||_F before symmetrisation
};

/// Nested central differences of eps -> phi(exp(eps), y_ref) at 0.
HessianReport hessian_at_identity(const InvariantCost& cost, double h = 1e-4);

/// sum_i k_i J_i^T Hess f(0) J_i.
Mat6 hessian_at_identity_analytic(const InvariantCost& cost);

/// Eigenvalues with |lambda| < rel_tol * lambda_max.
int hessian_kernel_dimension(const HessianReport& report, double rel_tol = 1e-6);

/// Largest radius r in `radii` (ascending) such that phi(exp(eps), y_ref) > 0
/// for every sampled |eps| = r and for all smaller tested radii.
double positive_definite_radius(const InvariantCost& cost, const std::vector<double>& radii,
                                int samples_per_radius = 200, std::uint64_t seed = 7);

}  // namespace lieobs

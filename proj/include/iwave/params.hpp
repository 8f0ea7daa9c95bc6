#pragma once

#include <string>

namespace iwave {

/// Dimensionless physical parameters of the two-layer problem.
struct Params {
  double eps = 0.1;        ///< nonlinearity ε ∈ [0, 1)
  double mu = 0.1;         ///< shallowness μ ∈ (0, 1]
  double gamma = 0.5;      ///< density ratio γ ∈ [0, 1]
  double bo_inv = 0.0;     ///< inverse Bond number bo⁻¹ ∈ [0, 1]
  double mu_minus = 10.0;  ///< upper-layer depth ratio μ⁻ ≥ 1 (ILW only)
  double alpha = 0.0;      ///< regularization weight α ≥ 0 (regularized BO system only)

  /// Throws iwave::Error when a parameter is non-finite or outside its range.
  void validate() const;

  /// Additionally enforces ε² ≤ bo⁻¹, required by the convergence experiments.
  void validate_weak_nonlinearity() const;

  std::string describe() const;
};

/// Returns a copy with one named parameter replaced ("eps", "mu", "gamma",
/// "bo_inv", "mu_minus", "alpha").
Params with_param(Params p, const std::string& name, double value);
double get_param(const Params& p, const std::string& name);

}  // namespace iwave

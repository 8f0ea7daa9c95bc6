#pragma once

#include <string_view>
#include <vector>

#include "iwave/field.hpp"
#include "iwave/params.hpp"

namespace iwave {

/// Multiplier expansion estimates, each measured as a ratio LHS/RHS.
///   est_T:          |(T(D) - 1) f|_{H^s} / |∂x² f|_{H^s}            (O(μ))
///   inv_tanh:       |(I(D) - 1) f|_{H^s} / |∂x f|_{H^s}             (O(√μ))
///   est_sqrtK:      |(√k(D) - 1) f|_{H^s} / |∂x f|_{H^{s+1}}        (O(√μ + bo⁻¹))
///   precise_sqrtK:  |(√k(D) - 1 + (γ/2)√μ|D| + bo⁻¹∂x²/2) f|_{H^s}
///                   / |∂x² f|_{H^{s+1}}                              (O(μ + √μ bo⁻¹))
enum class ExpansionId { est_T, inv_tanh, est_sqrtK, precise_sqrtK };

ExpansionId expansion_from_name(std::string_view name);
std::string_view expansion_name(ExpansionId id);

/// Throws iwave::Error when the denominator vanishes. μ = 0 is accepted and
/// makes every gap vanish.
double expansion_gap(ExpansionId id, const Field& f, const Params& p, double s = 0.0);

struct CoercivityReport {
  bool ok = false;
  /// inf over the samples of (t⁻¹(ξ) - 1 + h0/2) / (√μ|ξ|), ξ ≠ 0.
  double c_lower = 0.0;
  /// sup over the samples of t⁻¹(ξ) / (1 + √μ|ξ|).
  double c_upper = 0.0;
  /// t⁻¹(ξ) / (√μ|ξ|) at the largest sampled |ξ|; tends to 1 + γ.
  double high_frequency_ratio = 0.0;
};

/// Checks (1 - h0/2) + C_lower √μ|ξ| ≤ t⁻¹(ξ) ≤ C_upper (1 + √μ|ξ|) on the samples.
/// ok is true when C_lower > 0 and C_upper is finite, so both bounds hold with
/// the reported constants.
CoercivityReport coercivity_check(const std::vector<double>& xi_samples, const Params& p,
                                  double h0);

}  // namespace iwave

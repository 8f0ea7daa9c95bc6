#include "iwave/expansions.hpp"

#include <cmath>
#include <limits>

#include "iwave/spectral.hpp"
#include "iwave/symbols.hpp"

namespace iwave {

ExpansionId expansion_from_name(std::string_view name) {
  if (name == "est_T") return ExpansionId::est_T;
  if (name == "inv_tanh") return ExpansionId::inv_tanh;
  if (name == "est_sqrtK") return ExpansionId::est_sqrtK;
  if (name == "precise_sqrtK") return ExpansionId::precise_sqrtK;
  throw Error("unknown expansion '" + std::string(name) + "'");
}

std::string_view expansion_name(ExpansionId id) {
  switch (id) {
    case ExpansionId::est_T: return "est_T";
    case ExpansionId::inv_tanh: return "inv_tanh";
    case ExpansionId::est_sqrtK: return "est_sqrtK";
    case ExpansionId::precise_sqrtK: return "precise_sqrtK";
  }
  throw Error("unknown expansion id");
}

double expansion_gap(ExpansionId id, const Field& f, const Params& p, double s) {
  if (!std::isfinite(p.mu) || p.mu < 0.0) throw Error("expansion_gap: mu must be finite and >= 0");
  const double sqrt_mu = std::sqrt(p.mu);
  const NormSpec hs = NormSpec::sobolev(s);
  const NormSpec hs1 = NormSpec::sobolev(s + 1.0);

  double num = 0.0;
  double den = 0.0;
  switch (id) {
    case ExpansionId::est_T:
      num = norm(apply_multiplier(f, [&](double xi) { return eval_symbol(SymbolId::T, xi, p) - 1.0; }), hs);
      den = norm(derivative(f, 2), hs);
      break;
    case ExpansionId::inv_tanh:
      num = norm(apply_multiplier(f, [&](double xi) { return eval_symbol(SymbolId::I, xi, p) - 1.0; }), hs);
      den = norm(derivative(f, 1), hs);
      break;
    case ExpansionId::est_sqrtK:
      num = norm(apply_multiplier(f, [&](double xi) { return eval_symbol(SymbolId::sqrt_k, xi, p) - 1.0; }), hs);
      den = norm(derivative(f, 1), hs1);
      break;
    case ExpansionId::precise_sqrtK:
      num = norm(apply_multiplier(f,
                                  [&](double xi) {
                                    const double approx = 1.0 - 0.5 * p.gamma * sqrt_mu * std::abs(xi) +
                                                          0.5 * p.bo_inv * xi * xi;
                                    return eval_symbol(SymbolId::sqrt_k, xi, p) - approx;
                                  }),
                 hs);
      den = norm(derivative(f, 2), hs1);
      break;
  }
  if (!(den > 0.0)) throw Error("expansion_gap: denominator norm is zero");
  return num / den;
}

CoercivityReport coercivity_check(const std::vector<double>& xi_samples, const Params& p,
                                  double h0) {
  if (!(h0 > 0.0 && h0 < 1.0)) throw Error("coercivity_check: h0 must lie in (0, 1)");
  const double sqrt_mu = std::sqrt(p.mu);
  CoercivityReport rep;
  rep.c_lower = std::numeric_limits<double>::infinity();
  bool lower_at_zero_ok = true;
  double r_top = 0.0;
  for (double xi : xi_samples) {
    const double t_inv = 1.0 / eval_symbol(SymbolId::t, xi, p);
    const double r = sqrt_mu * std::abs(xi);
    rep.c_upper = std::max(rep.c_upper, t_inv / (1.0 + r));
    if (r > 0.0) {
      rep.c_lower = std::min(rep.c_lower, (t_inv - 1.0 + 0.5 * h0) / r);
      if (r > r_top) {
        r_top = r;
        rep.high_frequency_ratio = t_inv / r;
      }
    } else if (t_inv < 1.0 - 0.5 * h0) {
      lower_at_zero_ok = false;
    }
  }
  rep.ok = lower_at_zero_ok && rep.c_lower > 0.0 && std::isfinite(rep.c_upper);
  return rep;
}

}  // namespace iwave

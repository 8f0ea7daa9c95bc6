#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "iwave/error.hpp"
#include "iwave/params.hpp"

namespace iwave {

/// Closed-form Fourier symbols of the two-layer problem.
///
/// With r = √μ|ξ|:
///   T = tanh r / r,  I = 1/(1+γ tanh r),  t = I·T,  k = t(1 + bo⁻¹ξ²),
///   G0 = r tanh r/(1+γ tanh r),  Gp0 = r tanh r,  Gm0 = -r,
///   L_ilw = |ξ| coth(√μ⁻|ξ|) - 1/√μ⁻,
///   lin_bo = 1 - (γ/2) r,  lin_benjamin = lin_bo + bo⁻¹ξ²/2,
///   P_frak = |ξ| (1 + r)^{-1/2}.
enum class SymbolId {
  T,
  I,
  t,
  k,
  sqrt_k,
  sqrt_t,
  t_inv_half,
  G0,
  Gp0,
  Gm0,
  L_ilw,
  lin_bo,
  lin_benjamin,
  P_frak
};

SymbolId symbol_from_name(std::string_view name);
std::string_view symbol_name(SymbolId id);

namespace detail {

template <typename Scalar>
Scalar tanh_ratio(Scalar r) {
  if (r < Scalar(1e-4)) return Scalar(1) - r * r / Scalar(3) + Scalar(2) * r * r * r * r / Scalar(15);
  return std::tanh(r) / r;
}

// ρ coth ρ - 1, accurate near 0.
template <typename Scalar>
Scalar rho_coth_minus_one(Scalar rho) {
  if (rho < Scalar(0.1)) {
    const Scalar r2 = rho * rho;
    return r2 * (Scalar(1) / Scalar(3) +
                 r2 * (Scalar(-1) / Scalar(45) + r2 * (Scalar(2) / Scalar(945) - r2 / Scalar(4725))));
  }
  return rho / std::tanh(rho) - Scalar(1);
}

}  // namespace detail

template <typename Scalar>
Scalar eval_symbol(SymbolId id, Scalar xi, const Params& p) {
  if (!std::isfinite(static_cast<double>(xi))) throw Error("eval_symbol: non-finite wavenumber");
  if (std::isnan(p.mu) || std::isnan(p.gamma) || std::isnan(p.bo_inv) || std::isnan(p.mu_minus)) {
    throw Error("eval_symbol: NaN parameter");
  }
  const Scalar axi = std::abs(xi);
  const Scalar sqrt_mu = std::sqrt(Scalar(p.mu));
  const Scalar r = sqrt_mu * axi;
  const Scalar gamma = Scalar(p.gamma);
  const Scalar th = std::tanh(r);
  const Scalar interface_factor = Scalar(1) / (Scalar(1) + gamma * th);
  const Scalar t_sym = interface_factor * detail::tanh_ratio(r);
  const Scalar capillary = Scalar(1) + Scalar(p.bo_inv) * xi * xi;

  switch (id) {
    case SymbolId::T:
      return detail::tanh_ratio(r);
    case SymbolId::I:
      return interface_factor;
    case SymbolId::t:
      return t_sym;
    case SymbolId::k:
      return t_sym * capillary;
    case SymbolId::sqrt_k:
      return std::sqrt(t_sym * capillary);
    case SymbolId::sqrt_t:
      return std::sqrt(t_sym);
    case SymbolId::t_inv_half:
      return Scalar(1) / std::sqrt(t_sym);
    case SymbolId::G0:
      return r * th * interface_factor;
    case SymbolId::Gp0:
      return r * th;
    case SymbolId::Gm0:
      return -r;
    case SymbolId::L_ilw: {
      if (std::isinf(p.mu_minus)) return axi;
      const Scalar a = std::sqrt(Scalar(p.mu_minus));
      return detail::rho_coth_minus_one(a * axi) / a;
    }
    case SymbolId::lin_bo:
      return Scalar(1) - gamma / Scalar(2) * r;
    case SymbolId::lin_benjamin:
      return Scalar(1) - gamma / Scalar(2) * r + Scalar(p.bo_inv) * xi * xi / Scalar(2);
    case SymbolId::P_frak:
      return axi / std::sqrt(Scalar(1) + r);
  }
  throw Error("eval_symbol: unknown symbol tag");
}

/// Callable ξ ↦ symbol(ξ) for use with apply_multiplier.
template <typename Scalar = double>
auto symbol(SymbolId id, const Params& p) {
  return [id, p](Scalar xi) { return eval_symbol<Scalar>(id, xi, p); };
}

}  // namespace iwave

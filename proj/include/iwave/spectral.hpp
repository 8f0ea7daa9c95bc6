#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>

#include "iwave/error.hpp"
#include "iwave/field.hpp"

namespace iwave {

/// Diagonal Fourier operator ξ ↦ m(ξ) applied to f.
///
/// m must be finite on every grid mode, including ξ = 0 (pass the limit value there).
/// Multipliers with m(-ξ) = conj(m(ξ)) map real fields to real fields; the
/// unpaired Nyquist mode receives Re m(ξ_N), so odd symbols annihilate it.
template <typename Scalar, typename Multiplier>
FieldT<Scalar> apply_multiplier(const FieldT<Scalar>& f, Multiplier&& m) {
  using Complex = std::complex<Scalar>;
  const auto& grid = f.grid();
  const int n = grid.size();
  typename FieldT<Scalar>::ComplexVector out(n);
  for (int k = 0; k < n; ++k) {
    const Complex mk = Complex(m(grid.wavenumber(k)));
    if (!std::isfinite(static_cast<double>(mk.real())) ||
        !std::isfinite(static_cast<double>(mk.imag()))) {
      std::ostringstream msg;
      msg << "apply_multiplier: non-finite symbol at mode " << grid.signed_index(k)
          << " (xi = " << grid.wavenumber(k) << ")";
      throw Error(msg.str());
    }
    out[k] = (k == grid.nyquist_index() ? Complex(mk.real()) : mk) * f.spectrum()[k];
  }
  for (int k = 1; k < n / 2; ++k) {
    const Complex a = out[k];
    const Complex b = std::conj(out[grid.partner(k)]);
    const Scalar scale = std::abs(a) + std::abs(b);
    if (std::abs(a - b) > Scalar(1e-10) * scale + std::numeric_limits<Scalar>::min()) {
      std::ostringstream msg;
      msg << "apply_multiplier: symbol is not conjugate symmetric at mode " << k
          << "; the result would not be real";
      throw Error(msg.str());
    }
  }
  return FieldT<Scalar>::from_spectrum(grid, out);
}

/// Spectral derivative ∂x^order; odd orders zero the Nyquist mode.
template <typename Scalar>
FieldT<Scalar> derivative(const FieldT<Scalar>& f, int order = 1) {
  using Complex = std::complex<Scalar>;
  return apply_multiplier(f, [order](Scalar xi) {
    Complex ik(Scalar(0), xi);
    Complex r(1);
    for (int i = 0; i < order; ++i) r *= ik;
    return r;
  });
}

/// Zeroes |ξ| > (2/3) ξ_max and the Nyquist mode.
template <typename Scalar>
FieldT<Scalar> dealias(const FieldT<Scalar>& f) {
  const auto& grid = f.grid();
  const Scalar cutoff = Scalar(2) / Scalar(3) * grid.xi_max();
  typename FieldT<Scalar>::ComplexVector out = f.spectrum();
  for (int k = 0; k < grid.size(); ++k) {
    if (std::abs(grid.wavenumber(k)) > cutoff || k == grid.nyquist_index()) out[k] = 0;
  }
  return FieldT<Scalar>::from_spectrum(grid, out);
}

/// Physical-space product followed by the two-thirds rule.
template <typename Scalar>
FieldT<Scalar> dealiased_product(const FieldT<Scalar>& a, const FieldT<Scalar>& b) {
  return dealias(pointwise(a, b));
}

/// Discrete L² pairing h Σ f_j g_j on the periodic line.
template <typename Scalar>
Scalar inner(const FieldT<Scalar>& f, const FieldT<Scalar>& g) {
  return f.grid().spacing() * f.values().dot(g.values());
}

enum class NormKind { L2, Hs, Hs_bo, Hdot_half_mu, Hring_half };

/// Fourier weight w(ξ) defining |f|² = L Σ_k w(ξ_k)|c_k|².
struct NormSpec {
  NormKind kind = NormKind::L2;
  double s = 0.0;
  double bo_inv = 0.0;
  double mu = 1.0;

  static NormSpec l2() { return {}; }
  static NormSpec sobolev(double s) { return {NormKind::Hs, s}; }
  static NormSpec sobolev_bo(double s, double bo_inv) { return {NormKind::Hs_bo, s, bo_inv}; }
  /// |D|(1+√μ|D|)^{-1/2} measured in H^s.
  static NormSpec hdot_half_mu(double mu, double s = 0.0) {
    return {NormKind::Hdot_half_mu, s, 0.0, mu};
  }
  /// ⟨ξ⟩^{2s}|ξ|: the homogeneous H̊^{s+1/2} seminorm.
  static NormSpec hring_half(double s) { return {NormKind::Hring_half, s}; }

  template <typename Scalar>
  Scalar weight(Scalar xi) const {
    const Scalar bracket = std::pow(Scalar(1) + xi * xi, Scalar(s));
    switch (kind) {
      case NormKind::L2:
        return Scalar(1);
      case NormKind::Hs:
        return bracket;
      case NormKind::Hs_bo:
        return bracket * (Scalar(1) + Scalar(bo_inv) * xi * xi);
      case NormKind::Hdot_half_mu:
        return bracket * xi * xi / (Scalar(1) + std::sqrt(Scalar(mu)) * std::abs(xi));
      case NormKind::Hring_half:
        return bracket * std::abs(xi);
    }
    return Scalar(0);
  }

  bool homogeneous() const {
    return kind == NormKind::Hdot_half_mu || kind == NormKind::Hring_half;
  }
};

template <typename Scalar>
Scalar norm(const FieldT<Scalar>& f, const NormSpec& spec) {
  if (!f.all_finite()) throw Error("norm: non-finite field values");
  const auto& grid = f.grid();
  Scalar acc(0);
  for (int k = 0; k < grid.size(); ++k) {
    if (k == 0 && spec.homogeneous()) continue;
    acc += spec.weight(grid.wavenumber(k)) * std::norm(f.spectrum()[k]);
  }
  return std::sqrt(grid.length() * acc);
}

template <typename Scalar>
Scalar l2_norm(const FieldT<Scalar>& f) {
  return norm(f, NormSpec::l2());
}

}  // namespace iwave

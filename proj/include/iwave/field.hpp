#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include "iwave/error.hpp"
#include "iwave/grid.hpp"

namespace iwave {

namespace detail {

template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine() {
  // Eigen's FFT caches twiddles per size; one engine per thread keeps Fields sendable.
  static thread_local Eigen::FFT<Scalar> engine;
  return engine;
}

}  // namespace detail

/// Forward transform of real samples into Fourier coefficients c_k with
/// f(x_j) = Σ_k c_k exp(i ξ_k x_j), so the coefficients carry the phase of the
/// box origin x_0 = -L/2.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> forward_transform(
    const GridT<Scalar>& grid, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& values) {
  const int n = grid.size();
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> spectrum(n);
  detail::fft_engine<Scalar>().fwd(spectrum.data(), values.data(), n);
  const Scalar inv_n = Scalar(1) / Scalar(n);
  for (int k = 0; k < n; ++k) spectrum[k] *= (k % 2 == 0 ? inv_n : -inv_n);
  return spectrum;
}

/// Inverse of forward_transform; the input must be conjugate symmetric.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inverse_transform(
    const GridT<Scalar>& grid,
    const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>& spectrum) {
  const int n = grid.size();
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> shifted(n);
  const Scalar sn = Scalar(n);
  for (int k = 0; k < n; ++k) shifted[k] = spectrum[k] * (k % 2 == 0 ? sn : -sn);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values(n);
  detail::fft_engine<Scalar>().inv(values.data(), shifted.data(), n);
  return values;
}

/// Real periodic grid function with its Fourier coefficients kept in sync.
template <typename Scalar>
class FieldT {
 public:
  using Complex = std::complex<Scalar>;
  using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  FieldT(const GridT<Scalar>& grid, RealVector values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw Error("field: sample count does not match grid");
    spectrum_ = forward_transform(grid_, values_);
    // The Nyquist coefficient of a real sequence is real up to rounding.
    spectrum_[grid_.nyquist_index()].imag(Scalar(0));
  }

  /// Builds a field from coefficients, projecting onto conjugate-symmetric spectra.
  static FieldT from_spectrum(const GridT<Scalar>& grid, const ComplexVector& spectrum) {
    if (spectrum.size() != grid.size()) throw Error("field: spectrum size does not match grid");
    ComplexVector sym(grid.size());
    for (int k = 0; k < grid.size(); ++k) {
      sym[k] = Scalar(0.5) * (spectrum[k] + std::conj(spectrum[grid.partner(k)]));
    }
    return FieldT(grid, sym, RawTag{});
  }

  static FieldT zeros(const GridT<Scalar>& grid) {
    return FieldT(grid, RealVector::Zero(grid.size()));
  }

  static FieldT constant(const GridT<Scalar>& grid, Scalar c) {
    return FieldT(grid, RealVector::Constant(grid.size(), c));
  }

  /// Samples f at the grid points.
  template <typename F>
  static FieldT sample(const GridT<Scalar>& grid, F&& f) {
    RealVector v(grid.size());
    for (int j = 0; j < grid.size(); ++j) v[j] = f(grid.point(j));
    return FieldT(grid, std::move(v));
  }

  const GridT<Scalar>& grid() const { return grid_; }
  const RealVector& values() const { return values_; }
  const ComplexVector& spectrum() const { return spectrum_; }
  int size() const { return grid_.size(); }
  Scalar operator[](int j) const { return values_[j]; }

  Scalar mean() const { return spectrum_[0].real(); }
  Scalar max_abs() const { return values_.cwiseAbs().maxCoeff(); }
  bool all_finite() const { return values_.allFinite(); }

  FieldT& operator+=(const FieldT& o) {
    check_grid(o);
    values_ += o.values_;
    spectrum_ += o.spectrum_;
    return *this;
  }
  FieldT& operator-=(const FieldT& o) {
    check_grid(o);
    values_ -= o.values_;
    spectrum_ -= o.spectrum_;
    return *this;
  }
  FieldT& operator*=(Scalar a) {
    values_ *= a;
    spectrum_ *= a;
    return *this;
  }

  friend FieldT operator+(FieldT a, const FieldT& b) { return a += b; }
  friend FieldT operator-(FieldT a, const FieldT& b) { return a -= b; }
  friend FieldT operator*(FieldT a, Scalar s) { return a *= s; }
  friend FieldT operator*(Scalar s, FieldT a) { return a *= s; }
  friend FieldT operator-(FieldT a) { return a *= Scalar(-1); }

  /// Pointwise product in physical space, without dealiasing.
  friend FieldT pointwise(const FieldT& a, const FieldT& b) {
    a.check_grid(b);
    return FieldT(a.grid_, a.values_.cwiseProduct(b.values_));
  }

 private:
  struct RawTag {};

  FieldT(const GridT<Scalar>& grid, ComplexVector spectrum, RawTag)
      : grid_(grid), spectrum_(std::move(spectrum)) {
    values_ = inverse_transform(grid_, spectrum_);
  }

  void check_grid(const FieldT& o) const {
    if (!(grid_ == o.grid_)) throw Error("field: operands live on different grids");
  }

  GridT<Scalar> grid_;
  RealVector values_;
  ComplexVector spectrum_;
};

using Field = FieldT<double>;

}  // namespace iwave

#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "iwave/error.hpp"

namespace iwave {

/// Uniform periodic grid on [-L/2, L/2) with n points.
///
/// Modes are stored in FFT order: index k < n/2 carries wavenumber 2πk/L,
/// index k >= n/2 carries 2π(k - n)/L. Index n/2 is the Nyquist mode.
template <typename Scalar>
class GridT {
 public:
  using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  GridT(int n, Scalar length) : n_(n), length_(length) {
    if (n < 8 || n % 2 != 0) {
      throw Error("grid: point count must be even and >= 8, got " + std::to_string(n));
    }
    if (!(length > Scalar(0)) || !std::isfinite(static_cast<double>(length))) {
      throw Error("grid: box length must be positive and finite");
    }
  }

  int size() const { return n_; }
  Scalar length() const { return length_; }
  Scalar spacing() const { return length_ / Scalar(n_); }
  Scalar dxi() const { return Scalar(2) * std::numbers::pi_v<Scalar> / length_; }

  Scalar point(int j) const { return -length_ / Scalar(2) + Scalar(j) * spacing(); }

  /// Signed integer index of mode k in [-n/2, n/2).
  int signed_index(int k) const { return k < n_ / 2 ? k : k - n_; }
  Scalar wavenumber(int k) const { return Scalar(signed_index(k)) * dxi(); }
  int nyquist_index() const { return n_ / 2; }
  /// Index of the mode carrying -ξ_k (the Nyquist mode is its own partner).
  int partner(int k) const { return k == 0 ? 0 : n_ - k; }

  /// Largest representable |ξ|, attained by the Nyquist mode.
  Scalar xi_max() const { return Scalar(n_ / 2) * dxi(); }

  RealVector points() const {
    RealVector x(n_);
    for (int j = 0; j < n_; ++j) x[j] = point(j);
    return x;
  }

  RealVector wavenumbers() const {
    RealVector xi(n_);
    for (int k = 0; k < n_; ++k) xi[k] = wavenumber(k);
    return xi;
  }

  bool operator==(const GridT& other) const {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  int n_;
  Scalar length_;
};

using Grid = GridT<double>;

inline Grid make_grid(int n, double length) { return Grid(n, length); }

}  // namespace iwave

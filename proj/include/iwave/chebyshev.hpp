#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace iwave {

/// Chebyshev–Gauss–Lobatto nodes s_i = cos(πi/N), i = 0..N, from +1 down to -1.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> chebyshev_nodes(int N) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> s(N + 1);
  for (int i = 0; i <= N; ++i) s[i] = std::sin(std::numbers::pi_v<Scalar> * Scalar(N - 2 * i) / Scalar(2 * N));
  return s;
}

/// Collocation derivative matrix on chebyshev_nodes(N).
///
/// Node differences use the product-of-sines form and the diagonal is the
/// negative row sum, which keeps D applied to constants at exactly zero.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> chebyshev_matrix(int N) {
  using std::numbers::pi_v;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> D =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(N + 1, N + 1);
  auto c = [N](int i) { return (i == 0 || i == N) ? Scalar(2) : Scalar(1); };
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      const Scalar diff = Scalar(2) * std::sin(pi_v<Scalar> * Scalar(i + j) / Scalar(2 * N)) *
                          std::sin(pi_v<Scalar> * Scalar(j - i) / Scalar(2 * N));
      const Scalar sign = ((i + j) % 2 == 0) ? Scalar(1) : Scalar(-1);
      D(i, j) = c(i) / c(j) * sign / diff;
    }
    D(i, i) = -D.row(i).sum();
  }
  return D;
}

}  // namespace iwave

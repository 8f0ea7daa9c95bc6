#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace iwave {

struct GmresResult {
  int iterations = 0;
  double residual = 0.0;  ///< preconditioned residual relative to |M⁻¹b|
  bool converged = false;
};

/// Restarted GMRES on M⁻¹A x = M⁻¹b (left preconditioning, modified
/// Gram–Schmidt, Givens rotations). `x` holds the initial guess on entry.
template <typename ApplyA, typename ApplyMinv>
GmresResult gmres(const ApplyA& A, const ApplyMinv& Minv, const Eigen::VectorXd& b,
                  Eigen::VectorXd& x, double tol, int restart, int max_iterations) {
  GmresResult out;
  const Eigen::VectorXd pb = Minv(b);
  const double pb_norm = pb.norm();
  if (pb_norm == 0.0) {
    x.setZero();
    out.converged = true;
    return out;
  }
  const int m = restart;
  Eigen::MatrixXd V(b.size(), m + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd cs(m), sn(m), g(m + 1);

  while (out.iterations < max_iterations) {
    Eigen::VectorXd r = Minv(Eigen::VectorXd(b - A(x)));
    double beta = r.norm();
    out.residual = beta / pb_norm;
    if (out.residual <= tol) {
      out.converged = true;
      return out;
    }
    V.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    H.setZero();
    int j = 0;
    for (; j < m && out.iterations < max_iterations; ++j) {
      ++out.iterations;
      Eigen::VectorXd w = Minv(Eigen::VectorXd(A(Eigen::VectorXd(V.col(j)))));
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V.col(i).dot(w);
        w -= H(i, j) * V.col(i);
      }
      H(j + 1, j) = w.norm();
      const bool breakdown = !(H(j + 1, j) > 0.0);
      if (!breakdown) V.col(j + 1) = w / H(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const double rho = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = H(j, j) / rho;
      sn[j] = H(j + 1, j) / rho;
      H(j, j) = rho;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      if (std::abs(g[j + 1]) / pb_norm <= tol || breakdown) {
        ++j;
        break;
      }
    }
    // Back substitution on the j×j triangle.
    Eigen::VectorXd y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    x += V.leftCols(j) * y;
  }
  Eigen::VectorXd r = Minv(Eigen::VectorXd(b - A(x)));
  out.residual = r.norm() / pb_norm;
  out.converged = out.residual <= tol;
  return out;
}

}  // namespace iwave

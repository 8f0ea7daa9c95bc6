#pragma once

#include <memory>
#include <string_view>

#include <Eigen/Core>

#include "iwave/field.hpp"
#include "iwave/params.hpp"

namespace iwave {

/// Dirichlet–Neumann operators of the two-layer problem on straightened strips.
///
/// Lower strip S+ = {-1 < z < 0}, upper strip S- = {0 < z < Z_max}, a
/// truncation of the half strip. At Z_max the upper strip takes zero flux when
/// the interface data is a Dirichlet value and φ = 0 when it is a flux. Both use Fourier
/// collocation in x, Chebyshev–Gauss–Lobatto collocation in z, and the scaled
/// gradient ∇^μ = (√μ ∂x, ∂z). The interface z = 0 is node 0 of either strip.
enum class Side { plus, minus };

struct StripConfig {
  Side side = Side::plus;
  int nz = 32;
  /// Upper truncation height; 0 selects 12/(√μ ξ_min). Values below
  /// 4/(√μ ξ_min) are rejected.
  double z_max = 0.0;
  double tol = 1e-12;
  int restart = 60;
  int max_iterations = 600;
  /// Upper strip only: z = Z_max sinh(βt)/sinh β over t ∈ [0, 1]; 0 keeps nodes affine.
  double stretch = 4.0;
  /// Smallest admissible lower-layer depth 1 + εζ.
  double h_min = 0.1;

  static StripConfig plus_side(int nz = 32) {
    StripConfig c;
    c.nz = nz;
    return c;
  }
  static StripConfig minus_side(int nz = 48, double z_max = 0.0) {
    StripConfig c;
    c.side = Side::minus;
    c.nz = nz;
    c.z_max = z_max;
    return c;
  }
  void validate() const;
};

struct DnConfig {
  StripConfig plus = StripConfig::plus_side();
  StripConfig minus = StripConfig::minus_side();
  double coupled_tol = 1e-12;
  int coupled_max_iterations = 200;
};

/// Potential on a strip: phi(j, i) = φ(x_j, z_i).
struct StripSolution {
  Side side = Side::plus;
  Eigen::MatrixXd phi;
  Eigen::VectorXd z;
  double residual = 0.0;  ///< preconditioned relative residual of the solve
  int iterations = 0;
  Field conormal_trace;   ///< e_z · P ∇^μ φ at z = 0
};

/// What is prescribed at z = 0.
enum class InterfaceData { dirichlet, neumann };

/// Divergence-form elliptic operator ∇^μ · P(Σ±) ∇^μ for one surface ζ.
/// Building one factors the flat per-mode preconditioner once so repeated
/// solves on the same (ζ, ε, μ, grid) are cheap.
class StripOperator {
 public:
  StripOperator(const Field& zeta, const Params& p, const StripConfig& cfg, InterfaceData top);
  ~StripOperator();
  StripOperator(StripOperator&&) noexcept;
  StripOperator& operator=(StripOperator&&) noexcept;

  /// Solves with Dirichlet value or conormal flux `data` at z = 0.
  StripSolution solve(const Field& data) const;

  double z_max() const;
  const Eigen::VectorXd& nodes() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Default truncation 12/(√μ ξ_min) of the upper strip.
double default_z_max(const Grid& grid, double mu);

/// G+[εζ]ψ: Dirichlet data at z = 0, ∂n φ = 0 at z = -1, conormal trace at z = 0.
Field dn_plus(const Field& zeta, const Field& psi, const Params& p, const StripConfig& cfg);
/// G-[εζ]ψ: Dirichlet data at z = 0, zero flux at Z_max.
Field dn_minus(const Field& zeta, const Field& psi, const Params& p, const StripConfig& cfg);
/// (G-)⁻¹g: conormal flux g at z = 0, returns the trace shifted to zero mean.
Field inverse_dn_minus(const Field& zeta, const Field& flux, const Params& p,
                       const StripConfig& cfg);

struct CoupledResult {
  Field value;        ///< G_μ ψ = G+ ψ+
  Field psi_plus;     ///< solution of 𝒥ψ+ = ψ
  int iterations = 0;
  double residual = 0.0;
  /// |γ (G-)⁻¹G+ ψ+| / |ψ+| at the solution.
  double contraction = 0.0;
};

/// G_μ[εζ]ψ = G+ (1 - γ (G-)⁻¹G+)⁻¹ ψ by preconditioned GMRES on 𝒥ψ+ = ψ.
CoupledResult dn_coupled_solve(const Field& zeta, const Field& psi, const Params& p,
                               const DnConfig& cfg);
Field dn_coupled(const Field& zeta, const Field& psi, const Params& p, const DnConfig& cfg);

/// Power-iteration estimate of the spectral radius of γ (G-)⁻¹G+ on zero-mean data.
double contraction_estimate(const Field& zeta, const Params& p, const DnConfig& cfg,
                            int iterations = 8);

/// H_μ ψ+ = ∂x (G-)⁻¹ G+ ψ+.
Field interface_operator(const Field& zeta, const Field& psi_plus, const Params& p,
                         const DnConfig& cfg);

struct ShapeDerivativeResult {
  Field fd_value;
  Field formula_value;
  double rel_err = 0.0;  ///< |fd - formula|_{L2} / max(|formula|_{L2}, tiny)
};

/// Centered difference of ζ ↦ G+[εζ]ψ in direction h against
/// -ε G+(h w+) - ε μ ∂x(h V+).
ShapeDerivativeResult shape_derivative_check(const Field& zeta, const Field& h, const Field& psi,
                                             const Params& p, const StripConfig& cfg, double nu);

/// a(x) = (1 + εζ) arctan(r)/r with r = ε√μ ∂xζ, so that the tail symbol is
/// t(x, ξ) = a(x)|ξ|.
class TailSymbol {
 public:
  TailSymbol(const Field& zeta, const Params& p);
  const Eigen::VectorXd& coefficient() const { return a_; }
  double operator()(int j, double xi) const { return a_[j] * std::abs(xi); }

 private:
  Eigen::VectorXd a_;
};

/// Op(S+)ψ(x_j) = √μ Σ_k e^{iξ_k x_j} |ξ_k| tanh(√μ t(x_j, ξ_k)) ψ̂_k, summed directly.
Field apply_tail_operator(const Field& zeta, const Field& psi, const Params& p);

enum class SymbolicCheck { Gp_tail, Gm_flat };
enum class ExpansionCheck { Gp_shallow, H_interface };

SymbolicCheck symbolic_check_from_name(std::string_view name);
ExpansionCheck expansion_check_from_name(std::string_view name);

/// Gp_tail: |G+ψ - Op(S+)ψ|_{H^s};  Gm_flat: |G-ψ + √μ|D|ψ|_{H^{s+1/2}}.
double symbolic_check(const Field& zeta, const Field& psi, const Params& p, const DnConfig& cfg,
                      SymbolicCheck which, double s = 0.0);

/// Gp_shallow: |G+ψ + μ ∂x((1 + εζ) T(D) ∂xψ)|_{H^s};
/// H_interface: |H_μψ + tanh(√μ|D|) ∂xψ|_{H^s}.
double expansion_check(const Field& zeta, const Field& psi, const Params& p, const DnConfig& cfg,
                       ExpansionCheck which, double s = 0.0);

}  // namespace iwave

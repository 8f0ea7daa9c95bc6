#include "iwave/dno.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include <Eigen/LU>

#include "iwave/chebyshev.hpp"
#include "iwave/error.hpp"
#include "iwave/gmres.hpp"
#include "iwave/spectral.hpp"
#include "iwave/symbols.hpp"

namespace iwave {

namespace {

using Complex = std::complex<double>;

// Spectral ∂x applied to every column of M (one column per z level).
Eigen::MatrixXd dx_columns(const Grid& grid, const Eigen::MatrixXd& M) {
  Eigen::MatrixXd out(M.rows(), M.cols());
  const int n = grid.size();
  for (int i = 0; i < M.cols(); ++i) {
    Eigen::VectorXcd spec = forward_transform(grid, Eigen::VectorXd(M.col(i)));
    for (int k = 0; k < n; ++k) {
      spec[k] *= (k == grid.nyquist_index()) ? Complex(0.0) : Complex(0.0, grid.wavenumber(k));
    }
    out.col(i) = inverse_transform(grid, spec);
  }
  return out;
}

double smallest_wavenumber(const Grid& grid) { return grid.dxi(); }

}  // namespace

void StripConfig::validate() const {
  if (nz < 16) throw Error("strip: nz must be >= 16, got " + std::to_string(nz));
  if (!(tol > 0.0)) throw Error("strip: tolerance must be positive");
  if (restart < 1 || max_iterations < 1) throw Error("strip: restart and iteration cap must be >= 1");
  if (!(h_min > 0.0)) throw Error("strip: h_min must be positive");
  if (!(stretch >= 0.0) || !std::isfinite(stretch)) throw Error("strip: stretch must be >= 0");
  if (side == Side::minus && (z_max < 0.0 || !std::isfinite(z_max))) {
    throw Error("strip: z_max must be finite and non-negative");
  }
}

double default_z_max(const Grid& grid, double mu) {
  return 12.0 / (std::sqrt(mu) * smallest_wavenumber(grid));
}

struct StripOperator::Impl {
  Grid grid;
  Side side;
  InterfaceData top;
  StripConfig cfg;
  int nz;
  double mu, sqrt_mu;
  double zmax = 0.0;
  Eigen::VectorXd z;
  Eigen::MatrixXd Dz, DzT;
  Eigen::MatrixXd P11, P12, P22;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> flat_lu;

  Impl(const Field& zeta, const Params& p, const StripConfig& c, InterfaceData t)
      : grid(zeta.grid()), side(c.side), top(t), cfg(c), nz(c.nz), mu(p.mu), sqrt_mu(std::sqrt(p.mu)) {
    cfg.validate();
    if (!(p.mu > 0.0) || !std::isfinite(p.mu)) throw Error("strip: mu must be positive");
    if (!std::isfinite(p.eps)) throw Error("strip: eps must be finite");
    if (!zeta.all_finite()) throw Error("strip: surface has non-finite values");
    const int N = nz - 1;
    const Eigen::VectorXd s = chebyshev_nodes<double>(N);
    const Eigen::MatrixXd Ds = chebyshev_matrix<double>(N);
    if (side == Side::plus) {
      z = (s.array() - 1.0) / 2.0;
      Dz = 2.0 * Ds;
    } else {
      const double margin = 4.0 / (sqrt_mu * smallest_wavenumber(grid));
      zmax = cfg.z_max > 0.0 ? cfg.z_max : default_z_max(grid, p.mu);
      if (zmax < margin * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "strip: z_max = " << zmax << " is below the decay margin " << margin;
        throw Error(msg.str());
      }
      // Stretched coordinate z = Z_max sinh(β t)/sinh β, t = (1 - s)/2, which
      // clusters nodes near the interface where e^{-√μ|ξ| z} varies fastest.
      const double beta = cfg.stretch;
      Eigen::VectorXd dzds(nz);
      z.resize(nz);
      for (int i = 0; i < nz; ++i) {
        const double t = (1.0 - s[i]) / 2.0;
        if (beta > 0.0) {
          z[i] = zmax * std::sinh(beta * t) / std::sinh(beta);
          dzds[i] = -0.5 * zmax * beta * std::cosh(beta * t) / std::sinh(beta);
        } else {
          z[i] = zmax * t;
          dzds[i] = -0.5 * zmax;
        }
      }
      Dz = dzds.cwiseInverse().asDiagonal() * Ds;
    }
    DzT = Dz.transpose();

    const int n = grid.size();
    const Eigen::VectorXd zx = derivative(zeta).values();
    const double eps = p.eps;
    P11.resize(n, nz);
    P12.resize(n, nz);
    P22.resize(n, nz);
    if (side == Side::plus) {
      const Eigen::VectorXd depth = Eigen::VectorXd::Ones(n) + eps * zeta.values();
      const double lowest = depth.minCoeff();
      if (lowest < cfg.h_min) {
        std::ostringstream msg;
        msg << "strip: cavitation, min(1 + eps*zeta) = " << lowest << " < h_min = " << cfg.h_min;
        throw Error(msg.str());
      }
      for (int i = 0; i < nz; ++i) {
        const double zp1 = z[i] + 1.0;
        P11.col(i) = depth;
        P12.col(i) = -eps * sqrt_mu * zp1 * zx;
        P22.col(i) = (1.0 + (eps * eps * mu * zp1 * zp1) * zx.array().square()).matrix().cwiseQuotient(depth);
      }
    } else {
      for (int i = 0; i < nz; ++i) {
        P11.col(i).setOnes();
        P12.col(i) = -eps * sqrt_mu * zx;
        P22.col(i) = (1.0 + (eps * eps * mu) * zx.array().square()).matrix();
      }
    }
    build_preconditioner();
  }

  // Far edge of the strip. The upper strip takes φ = 0 there only for Neumann
  // interface data, where it pins the free constant; with Dirichlet data a
  // zero-mode φ linear in z would otherwise carry an O(1/Z_max) flux.
  bool no_flux_far_edge() const { return side == Side::plus || top == InterfaceData::dirichlet; }

  void build_preconditioner() {
    const int n = grid.size();
    const int N = nz - 1;
    const Eigen::MatrixXd D2 = Dz * Dz;
    flat_lu.clear();
    flat_lu.reserve(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k) {
      // The Nyquist mode is annihilated by each spectral ∂x.
      const double xi = (k == n / 2) ? 0.0 : grid.wavenumber(k);
      Eigen::MatrixXd A = D2;
      for (int i = 1; i < N; ++i) A(i, i) -= mu * xi * xi;
      A.row(0).setZero();
      if (top == InterfaceData::dirichlet) A(0, 0) = 1.0;
      else A.row(0) = Dz.row(0);
      if (no_flux_far_edge()) {
        A.row(N) = Dz.row(N);
      } else {
        A.row(N).setZero();
        A(N, N) = 1.0;
      }
      flat_lu.emplace_back(A);
    }
  }

  void fluxes(const Eigen::MatrixXd& Phi, Eigen::MatrixXd& Fx, Eigen::MatrixXd& Fz) const {
    const Eigen::MatrixXd phix = sqrt_mu * dx_columns(grid, Phi);
    const Eigen::MatrixXd phiz = Phi * DzT;
    Fx = P11.cwiseProduct(phix) + P12.cwiseProduct(phiz);
    Fz = P12.cwiseProduct(phix) + P22.cwiseProduct(phiz);
  }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& Phi) const {
    Eigen::MatrixXd Fx, Fz;
    fluxes(Phi, Fx, Fz);
    Eigen::MatrixXd R = sqrt_mu * dx_columns(grid, Fx) + Fz * DzT;
    const int N = nz - 1;
    R.col(0) = top == InterfaceData::dirichlet ? Eigen::VectorXd(Phi.col(0)) : Eigen::VectorXd(Fz.col(0));
    R.col(N) = no_flux_far_edge() ? Eigen::VectorXd(Fz.col(N)) : Eigen::VectorXd(Phi.col(N));
    return R;
  }

  Eigen::MatrixXd precondition(const Eigen::MatrixXd& R) const {
    const int n = grid.size();
    Eigen::MatrixXcd Rhat(n, nz);
    for (int i = 0; i < nz; ++i) Rhat.col(i) = forward_transform(grid, Eigen::VectorXd(R.col(i)));
    Eigen::MatrixXcd Phat(n, nz);
    for (int k = 0; k < n; ++k) {
      const int kk = k <= n / 2 ? k : n - k;
      const Eigen::VectorXcd rhs = Rhat.row(k).transpose();
      const Eigen::VectorXd re = flat_lu[kk].solve(Eigen::VectorXd(rhs.real()));
      const Eigen::VectorXd im = flat_lu[kk].solve(Eigen::VectorXd(rhs.imag()));
      for (int i = 0; i < nz; ++i) Phat(k, i) = Complex(re[i], im[i]);
    }
    Eigen::MatrixXd Phi(n, nz);
    for (int i = 0; i < nz; ++i) {
      Eigen::VectorXcd col = Phat.col(i);
      col[grid.nyquist_index()].imag(0.0);
      Phi.col(i) = inverse_transform(grid, col);
    }
    return Phi;
  }

  StripSolution solve(const Field& data) const {
    if (!(data.grid() == grid)) throw Error("strip: data and surface live on different grids");
    if (!data.all_finite()) throw Error("strip: boundary data has non-finite values");
    const int n = grid.size();
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, nz);
    B.col(0) = data.values();
    const Eigen::Map<const Eigen::VectorXd> b(B.data(), B.size());

    auto A = [this, n](const Eigen::VectorXd& x) {
      const Eigen::Map<const Eigen::MatrixXd> X(x.data(), n, nz);
      Eigen::MatrixXd Y = apply(X);
      return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(Y.data(), Y.size()));
    };
    auto M = [this, n](const Eigen::VectorXd& r) {
      const Eigen::Map<const Eigen::MatrixXd> Rm(r.data(), n, nz);
      Eigen::MatrixXd Y = precondition(Rm);
      return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(Y.data(), Y.size()));
    };
    Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
    const GmresResult res = gmres(A, M, Eigen::VectorXd(b), x, cfg.tol, cfg.restart, cfg.max_iterations);
    if (!res.converged) {
      std::ostringstream msg;
      msg << "strip solve did not converge: residual " << res.residual << " after " << res.iterations
          << " iterations (tolerance " << cfg.tol << ")";
      throw ConvergenceError(msg.str(), res.iterations, res.residual);
    }
    Eigen::MatrixXd phi = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, nz);
    Eigen::MatrixXd Fx, Fz;
    fluxes(phi, Fx, Fz);
    StripSolution sol{side, std::move(phi), z, res.residual, res.iterations, Field(grid, Fz.col(0))};
    return sol;
  }
};

StripOperator::StripOperator(const Field& zeta, const Params& p, const StripConfig& cfg,
                             InterfaceData top)
    : impl_(std::make_unique<Impl>(zeta, p, cfg, top)) {}
StripOperator::~StripOperator() = default;
StripOperator::StripOperator(StripOperator&&) noexcept = default;
StripOperator& StripOperator::operator=(StripOperator&&) noexcept = default;

StripSolution StripOperator::solve(const Field& data) const { return impl_->solve(data); }
double StripOperator::z_max() const { return impl_->zmax; }
const Eigen::VectorXd& StripOperator::nodes() const { return impl_->z; }

namespace {

void require_side(const StripConfig& cfg, Side side, const char* who) {
  if (cfg.side != side) {
    throw Error(std::string(who) + ": strip configuration is for the other side");
  }
}

Field zero_mean(const Field& f) { return f - Field::constant(f.grid(), f.mean()); }

}  // namespace

Field dn_plus(const Field& zeta, const Field& psi, const Params& p, const StripConfig& cfg) {
  require_side(cfg, Side::plus, "dn_plus");
  return StripOperator(zeta, p, cfg, InterfaceData::dirichlet).solve(psi).conormal_trace;
}

Field dn_minus(const Field& zeta, const Field& psi, const Params& p, const StripConfig& cfg) {
  require_side(cfg, Side::minus, "dn_minus");
  return StripOperator(zeta, p, cfg, InterfaceData::dirichlet).solve(psi).conormal_trace;
}

Field inverse_dn_minus(const Field& zeta, const Field& flux, const Params& p,
                       const StripConfig& cfg) {
  require_side(cfg, Side::minus, "inverse_dn_minus");
  StripSolution sol = StripOperator(zeta, p, cfg, InterfaceData::neumann).solve(flux);
  return zero_mean(Field(zeta.grid(), sol.phi.col(0)));
}

namespace {

struct CoupledOperators {
  StripOperator plus;
  StripOperator minus_neumann;

  CoupledOperators(const Field& zeta, const Params& p, const DnConfig& cfg)
      : plus((require_side(cfg.plus, Side::plus, "coupled"), zeta), p, cfg.plus, InterfaceData::dirichlet),
        minus_neumann((require_side(cfg.minus, Side::minus, "coupled"), zeta), p, cfg.minus,
                      InterfaceData::neumann) {}

  Field gplus(const Field& psi) const { return plus.solve(psi).conormal_trace; }

  // (G-)⁻¹ G+ ψ with the zero-mean trace convention.
  Field transfer(const Field& psi) const {
    StripSolution s = minus_neumann.solve(gplus(psi));
    return zero_mean(Field(psi.grid(), s.phi.col(0)));
  }
};

}  // namespace

CoupledResult dn_coupled_solve(const Field& zeta, const Field& psi, const Params& p,
                               const DnConfig& cfg) {
  if (!(p.gamma >= 0.0 && p.gamma < 1.0)) throw Error("dn_coupled: gamma must lie in [0, 1)");
  CoupledOperators ops(zeta, p, cfg);
  const Grid& grid = psi.grid();
  CoupledResult out{Field::zeros(grid), psi};
  if (p.gamma == 0.0) {
    out.value = ops.gplus(psi);
    return out;
  }
  auto J = [&](const Eigen::VectorXd& x) {
    Field xf(grid, x);
    return Eigen::VectorXd((xf - ops.transfer(xf) * p.gamma).values());
  };
  auto M = [&](const Eigen::VectorXd& r) {
    return Eigen::VectorXd(apply_multiplier(Field(grid, r), [&](double xi) {
                             return 1.0 / (1.0 + p.gamma * std::tanh(std::sqrt(p.mu) * std::abs(xi)));
                           }).values());
  };
  Eigen::VectorXd x = M(psi.values());
  const GmresResult res = gmres(J, M, psi.values(), x, cfg.coupled_tol, 40, cfg.coupled_max_iterations);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "dn_coupled: interface iteration did not converge, residual " << res.residual;
    throw ConvergenceError(msg.str(), res.iterations, res.residual);
  }
  out.psi_plus = Field(grid, x);
  out.value = ops.gplus(out.psi_plus);
  out.iterations = res.iterations;
  out.residual = res.residual;
  const double base = l2_norm(out.psi_plus);
  out.contraction = base > 0.0 ? p.gamma * l2_norm(ops.transfer(out.psi_plus)) / base : 0.0;
  return out;
}

Field dn_coupled(const Field& zeta, const Field& psi, const Params& p, const DnConfig& cfg) {
  return dn_coupled_solve(zeta, psi, p, cfg).value;
}

double contraction_estimate(const Field& zeta, const Params& p, const DnConfig& cfg, int iterations) {
  CoupledOperators ops(zeta, p, cfg);
  const Grid& grid = zeta.grid();
  // Deterministic start with every resolved mode present.
  const int kmax = grid.size() / 3;
  Field x = Field::sample(grid, [&](double xx) {
    double acc = 0.0;
    for (int k = 1; k <= kmax; ++k) acc += std::cos(k * grid.dxi() * xx + 0.7 * k);
    return acc;
  });
  double ratio = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double nx = l2_norm(x);
    Field y = ops.transfer(x) * p.gamma;
    ratio = l2_norm(y) / nx;
    x = y * (1.0 / l2_norm(y));
  }
  return ratio;
}

Field interface_operator(const Field& zeta, const Field& psi_plus, const Params& p,
                         const DnConfig& cfg) {
  CoupledOperators ops(zeta, p, cfg);
  return derivative(ops.transfer(psi_plus));
}

ShapeDerivativeResult shape_derivative_check(const Field& zeta, const Field& h, const Field& psi,
                                             const Params& p, const StripConfig& cfg, double nu) {
  require_side(cfg, Side::plus, "shape_derivative_check");
  if (!(nu > 0.0)) throw Error("shape_derivative_check: probe size must be positive");
  const Field up = zeta + h * nu;
  const Field down = zeta - h * nu;
  const double depth_up = 1.0 + p.eps * (up.values().minCoeff());
  const double depth_down = 1.0 + p.eps * (down.values().minCoeff());
  if (std::min(depth_up, depth_down) < cfg.h_min) {
    throw Error("shape_derivative_check: probe too large, perturbed surface cavitates");
  }
  ShapeDerivativeResult out{Field::zeros(zeta.grid()), Field::zeros(zeta.grid())};
  out.fd_value = (dn_plus(up, psi, p, cfg) - dn_plus(down, psi, p, cfg)) * (0.5 / nu);

  StripOperator base(zeta, p, cfg, InterfaceData::dirichlet);
  const Field g = base.solve(psi).conormal_trace;
  const Eigen::ArrayXd zx = derivative(zeta).values().array();
  const Eigen::ArrayXd px = derivative(psi).values().array();
  const double eps = p.eps;
  const double mu = p.mu;
  const Eigen::ArrayXd w = (g.values().array() + eps * mu * zx * px) / (1.0 + eps * eps * mu * zx * zx);
  const Eigen::ArrayXd V = px - eps * w * zx;
  const Grid& grid = zeta.grid();
  const Field hw(grid, (h.values().array() * w).matrix());
  const Field hV(grid, (h.values().array() * V).matrix());
  out.formula_value = base.solve(hw).conormal_trace * (-eps) - derivative(hV) * (eps * mu);
  const double scale = l2_norm(out.formula_value);
  const double diff = l2_norm(out.fd_value - out.formula_value);
  out.rel_err = scale > 0.0 ? diff / scale : diff;
  return out;
}

TailSymbol::TailSymbol(const Field& zeta, const Params& p) {
  const Eigen::VectorXd zx = derivative(zeta).values();
  const double c = p.eps * std::sqrt(p.mu);
  a_.resize(zeta.size());
  for (int j = 0; j < zeta.size(); ++j) {
    const double r = c * zx[j];
    const double ratio = std::abs(r) < 1e-3 ? 1.0 - r * r / 3.0 + r * r * r * r / 5.0 : std::atan(r) / r;
    a_[j] = (1.0 + p.eps * zeta[j]) * ratio;
  }
}

Field apply_tail_operator(const Field& zeta, const Field& psi, const Params& p) {
  const TailSymbol tail(zeta, p);
  const Grid& grid = psi.grid();
  const int n = grid.size();
  const double sqrt_mu = std::sqrt(p.mu);
  const Eigen::VectorXcd& c = psi.spectrum();
  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) {
    const double x = grid.point(j);
    Complex acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double xi = grid.wavenumber(k);
      if (xi == 0.0) continue;
      const double symbol = sqrt_mu * std::abs(xi) * std::tanh(sqrt_mu * tail(j, xi));
      acc += symbol * c[k] * std::exp(Complex(0.0, xi * x));
    }
    out[j] = acc.real();
  }
  return Field(grid, out);
}

SymbolicCheck symbolic_check_from_name(std::string_view name) {
  if (name == "Gp_tail") return SymbolicCheck::Gp_tail;
  if (name == "Gm_flat") return SymbolicCheck::Gm_flat;
  throw Error("unknown symbolic check '" + std::string(name) + "'");
}

ExpansionCheck expansion_check_from_name(std::string_view name) {
  if (name == "Gp_shallow") return ExpansionCheck::Gp_shallow;
  if (name == "H_interface") return ExpansionCheck::H_interface;
  throw Error("unknown expansion check '" + std::string(name) + "'");
}

double symbolic_check(const Field& zeta, const Field& psi, const Params& p, const DnConfig& cfg,
                      SymbolicCheck which, double s) {
  if (which == SymbolicCheck::Gp_tail) {
    const Field gap = dn_plus(zeta, psi, p, cfg.plus) - apply_tail_operator(zeta, psi, p);
    return norm(gap, NormSpec::sobolev(s));
  }
  const double sqrt_mu = std::sqrt(p.mu);
  const Field flat = apply_multiplier(psi, [sqrt_mu](double xi) { return sqrt_mu * std::abs(xi); });
  return norm(dn_minus(zeta, psi, p, cfg.minus) + flat, NormSpec::sobolev(s + 0.5));
}

double expansion_check(const Field& zeta, const Field& psi, const Params& p, const DnConfig& cfg,
                       ExpansionCheck which, double s) {
  const Grid& grid = psi.grid();
  if (which == ExpansionCheck::Gp_shallow) {
    const Field tdx = apply_multiplier(psi, [&p](double xi) {
      return Complex(0.0, xi) * eval_symbol(SymbolId::T, xi, p);
    });
    const Field flux(grid, ((1.0 + p.eps * zeta.values().array()) * tdx.values().array()).matrix());
    const Field approx = derivative(flux) * (-p.mu);
    return norm(dn_plus(zeta, psi, p, cfg.plus) - approx, NormSpec::sobolev(s));
  }
  const double sqrt_mu = std::sqrt(p.mu);
  const Field approx = apply_multiplier(psi, [sqrt_mu](double xi) {
    return -std::tanh(sqrt_mu * std::abs(xi)) * Complex(0.0, xi);
  });
  return norm(interface_operator(zeta, psi, p, cfg) - approx, NormSpec::sobolev(s));
}

}  // namespace iwave

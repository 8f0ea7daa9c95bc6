#include "iwave/integrator.hpp"

#include <cmath>
#include <sstream>

#include "iwave/error.hpp"
#include "iwave/spectral.hpp"

namespace iwave {

namespace {

using Complex = std::complex<double>;

constexpr double kTaylorRadius = 0.5;
constexpr int kTaylorTerms = 30;

double inv_factorial(int m) {
  double r = 1.0;
  for (int i = 2; i <= m; ++i) r /= i;
  return r;
}

// Σ_j z2^j g_{2j+offset} with g_m = 1/(m+k)!.
Complex even_series(int k, int offset, Complex z2) {
  Complex acc = 0.0;
  Complex pw = 1.0;
  for (int j = 0; j < kTaylorTerms; ++j) {
    acc += pw * inv_factorial(2 * j + offset + k);
    pw *= z2;
  }
  return acc;
}

}  // namespace

Scheme scheme_from_name(std::string_view name) {
  if (name == "IF_RK4") return Scheme::IF_RK4;
  if (name == "ETD_RK4") return Scheme::ETD_RK4;
  throw Error("unknown scheme '" + std::string(name) + "'");
}

std::string_view scheme_name(Scheme s) {
  return s == Scheme::IF_RK4 ? "IF_RK4" : "ETD_RK4";
}

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("stepper: dt must be positive and finite");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error("stepper: t_end must be >= 0");
  if (stride < 1) throw Error("stepper: stride must be >= 1");
}

Complex phi(int k, Complex z) {
  if (k < 0) throw Error("phi: negative index");
  if (std::abs(z) < kTaylorRadius) {
    Complex acc = 0.0;
    Complex pw = 1.0;
    for (int m = 0; m < kTaylorTerms; ++m) {
      acc += pw * inv_factorial(m + k);
      pw *= z;
    }
    return acc;
  }
  Complex value = std::exp(z);
  for (int j = 1; j <= k; ++j) value = (value - inv_factorial(j - 1)) / z;
  return value;
}

Eigen::Matrix2cd phi_matrix(int k, const Eigen::Matrix2cd& Z, bool scalar) {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  if (scalar) {
    out(0, 0) = phi(k, Z(0, 0));
    return out;
  }
  // Z² = λ² I, so f(Z) = c0(λ²) I + c1(λ²) Z with c0, c1 the even and odd parts of f.
  const Complex lambda2 = Z(0, 1) * Z(1, 0);
  const Complex lambda = std::sqrt(lambda2);
  Complex c0;
  Complex c1;
  if (std::abs(lambda) < kTaylorRadius) {
    c0 = even_series(k, 0, lambda2);
    c1 = even_series(k, 1, lambda2);
  } else {
    const Complex fp = phi(k, lambda);
    const Complex fm = phi(k, -lambda);
    c0 = 0.5 * (fp + fm);
    c1 = (fp - fm) / (2.0 * lambda);
  }
  out = c1 * Z;
  out(0, 0) += c0;
  out(1, 1) += c0;
  return out;
}

Conserved conserved(const State& s, const ModelSpec& m) {
  s.check();
  if (static_cast<int>(s.fields.size()) != m.field_count()) {
    throw Error("conserved: state does not match model");
  }
  Conserved c;
  const double length = s.grid().length();
  for (const Field& f : s.fields) c.mass.push_back(f.mean() * length);
  c.momentum = inner(s.fields[0], s.fields[0]);
  return c;
}

Stepper::Stepper(const ModelSpec& model, const Grid& grid, Scheme scheme, double dt)
    : model_(model), grid_(grid), scheme_(scheme), dt_(dt), nf_(model.field_count()) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("stepper: dt must be positive and finite");
  const int n = grid.size();
  const bool scalar = nf_ == 1;
  e_full_.resize(n);
  e_half_.resize(n);
  if (scheme_ == Scheme::ETD_RK4) {
    q_half_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
  }
  for (int k = 0; k < n; ++k) {
    Eigen::Matrix2cd L = model_.linear_block(grid.wavenumber(k));
    // The Nyquist mode has no partner; only the real part of the symbol acts on it.
    if (k == grid.nyquist_index()) L = L.real().cast<Complex>();
    const Eigen::Matrix2cd Z = dt * L;
    const Eigen::Matrix2cd Zh = 0.5 * dt * L;
    e_full_[k] = phi_matrix(0, Z, scalar);
    e_half_[k] = phi_matrix(0, Zh, scalar);
    if (scheme_ == Scheme::ETD_RK4) {
      q_half_[k] = 0.5 * dt * phi_matrix(1, Zh, scalar);
      const Eigen::Matrix2cd p1 = phi_matrix(1, Z, scalar);
      const Eigen::Matrix2cd p2 = phi_matrix(2, Z, scalar);
      const Eigen::Matrix2cd p3 = phi_matrix(3, Z, scalar);
      f1_[k] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
      f2_[k] = dt * (p2 - 2.0 * p3);
      f3_[k] = dt * (4.0 * p3 - p2);
    }
  }
}

Stepper::Spectra Stepper::apply(const std::vector<Eigen::Matrix2cd>& op, const Spectra& u) const {
  Spectra out(nf_, Eigen::VectorXcd(grid_.size()));
  for (int k = 0; k < grid_.size(); ++k) {
    if (nf_ == 1) {
      out[0][k] = op[k](0, 0) * u[0][k];
    } else {
      out[0][k] = op[k](0, 0) * u[0][k] + op[k](0, 1) * u[1][k];
      out[1][k] = op[k](1, 0) * u[0][k] + op[k](1, 1) * u[1][k];
    }
  }
  return out;
}

Stepper::Spectra Stepper::nonlinear(const Spectra& u, double time) const {
  State s;
  s.time = time;
  for (const auto& spec : u) s.fields.push_back(Field::from_spectrum(grid_, spec));
  Tendency nl = model_.nonlinear(s);
  Spectra out;
  out.reserve(nl.size());
  for (const Field& f : nl) out.push_back(f.spectrum());
  return out;
}

double Stepper::max_stable_dt(const State& s) const {
  double amp = 0.0;
  for (const Field& f : s.fields) amp = std::max(amp, f.max_abs());
  return grid_.spacing() / (model_.params().eps * amp + 1.0);
}

namespace {

using Spectra = std::vector<Eigen::VectorXcd>;

Spectra axpy(const Spectra& x, double a, const Spectra& y) {
  Spectra out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * y[i];
  return out;
}

}  // namespace

State Stepper::advance(const State& s, long step_index) const {
  if (static_cast<int>(s.fields.size()) != nf_) throw Error("stepper: state does not match model");
  if (!(s.grid() == grid_)) throw Error("stepper: state lives on a different grid");
  Spectra u;
  for (const Field& f : s.fields) u.push_back(f.spectrum());
  const double h = dt_;
  const double t = s.time;

  Spectra next;
  if (scheme_ == Scheme::IF_RK4) {
    const Spectra k1 = nonlinear(u, t);
    const Spectra k2 = nonlinear(apply(e_half_, axpy(u, 0.5 * h, k1)), t + 0.5 * h);
    const Spectra eu_half = apply(e_half_, u);
    const Spectra k3 = nonlinear(axpy(eu_half, 0.5 * h, k2), t + 0.5 * h);
    const Spectra k4 = nonlinear(axpy(apply(e_full_, u), h, apply(e_half_, k3)), t + h);
    next = apply(e_full_, u);
    const Spectra ek1 = apply(e_full_, k1);
    const Spectra ek23 = apply(e_half_, axpy(k2, 1.0, k3));
    for (int i = 0; i < nf_; ++i) next[i] += (h / 6.0) * (ek1[i] + 2.0 * ek23[i] + k4[i]);
  } else {
    const Spectra nu = nonlinear(u, t);
    const Spectra eu_half = apply(e_half_, u);
    Spectra a = axpy(eu_half, 1.0, apply(q_half_, nu));
    const Spectra na = nonlinear(a, t + 0.5 * h);
    const Spectra b = axpy(eu_half, 1.0, apply(q_half_, na));
    const Spectra nb = nonlinear(b, t + 0.5 * h);
    Spectra c = axpy(apply(e_half_, a), 1.0, apply(q_half_, axpy(axpy(nb, 1.0, nb), -1.0, nu)));
    const Spectra nc = nonlinear(c, t + h);
    next = apply(e_full_, u);
    const Spectra t1 = apply(f1_, nu);
    const Spectra t2 = apply(f2_, axpy(na, 1.0, nb));
    const Spectra t3 = apply(f3_, nc);
    for (int i = 0; i < nf_; ++i) next[i] += t1[i] + 2.0 * t2[i] + t3[i];
  }

  State out;
  out.time = t + h;
  for (const auto& spec : next) {
    out.fields.push_back(Field::from_spectrum(grid_, spec));
    if (!out.fields.back().all_finite()) {
      std::ostringstream msg;
      msg << "non-finite state after step " << step_index << " at t = " << out.time;
      throw StepError(msg.str(), step_index, out.time);
    }
  }
  return out;
}

namespace {

void check_advective_bound(const Stepper& stepper, const State& s, long step_index) {
  const double limit = stepper.max_stable_dt(s);
  if (stepper.dt() > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt = " << stepper.dt() << " exceeds the advective bound " << limit << " at step "
        << step_index;
    throw StepError(msg.str(), step_index, s.time);
  }
}

Observables observe(const State& s) {
  Observables o;
  const double length = s.grid().length();
  for (const Field& f : s.fields) {
    o.mass.push_back(f.mean() * length);
    o.l2.push_back(std::sqrt(inner(f, f)));
  }
  o.momentum = inner(s.fields[0], s.fields[0]);
  return o;
}

}  // namespace

State step(const State& s, const ModelSpec& m, const StepperConfig& cfg) {
  cfg.validate();
  Stepper stepper(m, s.grid(), cfg.scheme, cfg.dt);
  check_advective_bound(stepper, s, 0);
  return stepper.advance(s, 0);
}

Trajectory evolve(const State& s, const ModelSpec& m, const StepperConfig& cfg) {
  cfg.validate();
  s.check();
  Trajectory traj;
  auto record = [&traj](const State& st) {
    traj.times.push_back(st.time);
    traj.states.push_back(st);
    traj.observables.push_back(observe(st));
  };
  record(s);
  if (cfg.t_end == 0.0) return traj;

  const long steps = std::max<long>(1, static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9)));
  const double dt = cfg.t_end / static_cast<double>(steps);
  Stepper stepper(m, s.grid(), cfg.scheme, dt);
  State cur = s;
  const double t0 = s.time;
  for (long i = 1; i <= steps; ++i) {
    check_advective_bound(stepper, cur, i);
    cur = stepper.advance(cur, i);
    // Pin the clock to t0 + i·dt so round-off does not accumulate in the time stamps.
    cur.time = t0 + static_cast<double>(i) * dt;
    if (i % cfg.stride == 0 || i == steps) record(cur);
  }
  return traj;
}

}  // namespace iwave

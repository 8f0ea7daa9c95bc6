#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "iwave/models.hpp"

namespace iwave {

enum class Scheme { IF_RK4, ETD_RK4 };

Scheme scheme_from_name(std::string_view name);
std::string_view scheme_name(Scheme s);

struct StepperConfig {
  Scheme scheme = Scheme::IF_RK4;
  double dt = 1e-3;
  double t_end = 1.0;
  int stride = 1;

  void validate() const;
};

struct Conserved {
  std::vector<double> mass;  ///< ∫ of each field
  double momentum = 0.0;     ///< ∫ ζ²
};

Conserved conserved(const State& s, const ModelSpec& m);

struct Observables {
  std::vector<double> mass;
  double momentum = 0.0;
  std::vector<double> l2;  ///< L² norm of each field
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<Observables> observables;

  std::size_t size() const { return times.size(); }
};

/// φ_k(z) = Σ_m z^m/(m+k)!, with φ_0 = exp. Taylor series for |z| < 1/2.
std::complex<double> phi(int k, std::complex<double> z);

/// f(Z) for a 2x2 Z with zero diagonal (or a scalar stored in entry (0,0)
/// when `scalar` is true), where f = φ_k.
Eigen::Matrix2cd phi_matrix(int k, const Eigen::Matrix2cd& Z, bool scalar);

/// Per-mode exponential stepper for one model on one grid.
class Stepper {
 public:
  Stepper(const ModelSpec& model, const Grid& grid, Scheme scheme, double dt);

  /// Advances s by dt; `step_index` is used in error reports.
  State advance(const State& s, long step_index = 0) const;

  double dt() const { return dt_; }
  /// Largest dt allowed by dt ≤ h/(ε max|U| + 1) for this state.
  double max_stable_dt(const State& s) const;

 private:
  using Spectra = std::vector<Eigen::VectorXcd>;

  Spectra nonlinear(const Spectra& u, double time) const;
  Spectra apply(const std::vector<Eigen::Matrix2cd>& op, const Spectra& u) const;

  ModelSpec model_;
  Grid grid_;
  Scheme scheme_;
  double dt_;
  int nf_;
  std::vector<Eigen::Matrix2cd> e_full_, e_half_;
  std::vector<Eigen::Matrix2cd> q_half_, f1_, f2_, f3_;
};

/// One step; throws StepError on non-finite output and iwave::Error when dt
/// breaks the advective bound.
State step(const State& s, const ModelSpec& m, const StepperConfig& cfg);

/// Steps from s.time to s.time + t_end. The step count is ceil(t_end/dt) and
/// the step is shrunk so the run lands exactly on t_end. Records the initial
/// state, every `stride` steps, and the final state.
Trajectory evolve(const State& s, const ModelSpec& m, const StepperConfig& cfg);

}  // namespace iwave

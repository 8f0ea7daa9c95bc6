#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "iwave/dno.hpp"
#include "iwave/integrator.hpp"
#include "iwave/models.hpp"
#include "iwave/params.hpp"
#include "iwave/rate.hpp"

namespace iwave {

enum class ExperimentKind { simulate, compare, ilw_limit, dno_validate, multiplier_check };

ExperimentKind experiment_from_name(std::string_view name);
std::string_view experiment_name(ExperimentKind kind);

/// Named initial profile. A width of 0 means L/20.
///   gaussian: a·exp(-(x/w)²) minus its mean
///   sech2:    a·sech²(x/w) minus its mean
///   bump:     a·exp(-(x/w)²), mean kept (surface data for DN checks)
struct InitialData {
  std::string profile = "gaussian";
  double amplitude = 1.0;
  double width = 0.0;
};

Field make_profile(const Grid& grid, const InitialData& data);

/// While sweeping, `parameter` follows factor·value^power.
struct ParamTie {
  std::string parameter;
  double factor = 1.0;
  double power = 1.0;
};

/// The pseudo-parameter "nu" sweeps the probe step of the shape-derivative check;
/// every other name must be a field of Params.
struct SweepAxis {
  std::string parameter;
  std::vector<double> values;
  std::vector<ParamTie> ties;

  bool empty() const { return values.empty(); }
};

Params sweep_point(const Params& base, const SweepAxis& axis, double value);

struct DnSettings {
  int nz_plus = 32;
  int nz_minus = 48;
  double stretch = 4.0;
  double tol = 1e-12;

  DnConfig config() const;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::simulate;
  std::vector<ModelId> models;
  Params params;
  int n = 512;
  double length = 40.0;
  StepperConfig stepper{Scheme::ETD_RK4, 1e-2, 1.0, 10};
  double norm_s = 2.0;
  InitialData initial;
  SweepAxis sweep;
  /// Expansion name for multiplier-check, DN check name for dno-validate.
  std::string check;
  DnSettings dno;
  std::optional<double> predicted_exponent;
  std::optional<double> tolerance;
  /// Worker threads for sweep points; 0 picks the hardware count.
  int threads = 0;

  Grid grid() const { return Grid(n, length); }
  /// Throws iwave::Error on an inconsistent or out-of-range configuration,
  /// including every sweep point.
  void validate() const;
  /// Predicted exponent and tolerance, falling back to the defaults of the
  /// experiment and check.
  double expected_exponent() const;
  double expected_tolerance() const;
};

/// Strict loader: unknown keys are errors. `kind` overrides any "experiment"
/// entry in the document.
ExperimentConfig config_from_json(const nlohmann::json& doc,
                                  std::optional<ExperimentKind> kind = std::nullopt);
ExperimentConfig load_config(const std::string& path,
                             std::optional<ExperimentKind> kind = std::nullopt);
nlohmann::json to_json(const ExperimentConfig& cfg);

struct SimulationResult {
  ModelId model;
  Trajectory trajectory;
};

SimulationResult run_simulate(const ExperimentConfig& cfg);

/// Initial states of the two models of a comparison, built from ζ0.
std::pair<State, State> comparison_states(ModelId a, ModelId b, const Field& zeta0, const Params& p);

/// sup over recorded times of |ζ_a - ζ_b|_{H^s} for one parameter set.
double compare_models(ModelId a, ModelId b, const Params& p, const Grid& grid,
                      const StepperConfig& stepper, const Field& zeta0, double s);

RateReport run_compare(const ExperimentConfig& cfg);
/// Compares ILW with BO along a sweep of mu_minus.
RateReport run_ilw_limit(const ExperimentConfig& cfg);
RateReport run_multiplier_check(const ExperimentConfig& cfg);
/// Checks: Gp_shallow, H_interface, Gp_tail, Gm_flat (sweep a parameter) and
/// shape_derivative (sweep "nu"). ψ = sin κx + 0.5 cos 2κx with κ = 2π/L and
/// the perturbation h = cos κx + 0.3 sin 2κx are fixed.
RateReport run_dno_validate(const ExperimentConfig& cfg);

/// Dispatches on cfg.kind for the sweep experiments.
RateReport run_sweep(const ExperimentConfig& cfg);

}  // namespace iwave

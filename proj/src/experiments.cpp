#include "iwave/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "iwave/error.hpp"
#include "iwave/expansions.hpp"
#include "iwave/spectral.hpp"

namespace iwave {

using nlohmann::json;

ExperimentKind experiment_from_name(std::string_view name) {
  if (name == "simulate") return ExperimentKind::simulate;
  if (name == "compare") return ExperimentKind::compare;
  if (name == "ilw-limit") return ExperimentKind::ilw_limit;
  if (name == "dno-validate") return ExperimentKind::dno_validate;
  if (name == "multiplier-check") return ExperimentKind::multiplier_check;
  throw Error("experiment: unknown kind '" + std::string(name) + "'");
}

std::string_view experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::simulate:
      return "simulate";
    case ExperimentKind::compare:
      return "compare";
    case ExperimentKind::ilw_limit:
      return "ilw-limit";
    case ExperimentKind::dno_validate:
      return "dno-validate";
    case ExperimentKind::multiplier_check:
      return "multiplier-check";
  }
  throw Error("experiment: unknown kind tag");
}

Field make_profile(const Grid& grid, const InitialData& data) {
  if (!std::isfinite(data.amplitude)) throw Error("initial data: amplitude must be finite");
  if (!(data.width >= 0.0) || !std::isfinite(data.width)) {
    throw Error("initial data: width must be finite and non-negative");
  }
  const double w = data.width > 0.0 ? data.width : grid.length() / 20.0;
  const double a = data.amplitude;
  if (data.profile == "gaussian" || data.profile == "bump") {
    Field f = Field::sample(grid, [a, w](double x) { return a * std::exp(-(x / w) * (x / w)); });
    return data.profile == "bump" ? f : f - Field::constant(grid, f.mean());
  }
  if (data.profile == "sech2") {
    Field f = Field::sample(grid, [a, w](double x) {
      const double c = 1.0 / std::cosh(x / w);
      return a * c * c;
    });
    return f - Field::constant(grid, f.mean());
  }
  throw Error("initial data: unknown profile '" + data.profile + "'");
}

Params sweep_point(const Params& base, const SweepAxis& axis, double value) {
  Params p = base;
  if (axis.parameter != "nu") p = with_param(p, axis.parameter, value);
  for (const ParamTie& tie : axis.ties) {
    p = with_param(p, tie.parameter, tie.factor * std::pow(value, tie.power));
  }
  return p;
}

DnConfig DnSettings::config() const {
  DnConfig c;
  c.plus = StripConfig::plus_side(nz_plus);
  c.minus = StripConfig::minus_side(nz_minus);
  for (StripConfig* s : {&c.plus, &c.minus}) {
    s->stretch = stretch;
    s->tol = tol;
  }
  c.coupled_tol = tol;
  return c;
}

namespace {

bool uses_capillarity(ModelId id) {
  return id == ModelId::BENJAMIN || id == ModelId::WB_EQ || id == ModelId::WB_SYS;
}

const std::vector<std::string>& dn_checks() {
  static const std::vector<std::string> names{"Gp_shallow", "H_interface", "Gp_tail", "Gm_flat",
                                              "shape_derivative"};
  return names;
}

std::pair<double, double> default_rate(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::compare:
      return {1.0, 0.25};
    case ExperimentKind::ilw_limit:
      return {-0.5, 0.15};
    case ExperimentKind::multiplier_check:
      switch (expansion_from_name(cfg.check)) {
        case ExpansionId::est_T:
          return {1.0, 0.2};
        case ExpansionId::inv_tanh:
        case ExpansionId::est_sqrtK:
          return {0.5, 0.15};
        case ExpansionId::precise_sqrtK:
          return {1.0, 0.25};
      }
      break;
    case ExperimentKind::dno_validate:
      if (cfg.check == "Gp_shallow") return {2.0, 0.3};
      if (cfg.check == "H_interface") return {0.5, 0.2};
      if (cfg.check == "Gp_tail") return {1.0, 0.3};
      if (cfg.check == "Gm_flat") return {1.0, 0.25};
      if (cfg.check == "shape_derivative") return {2.0, 0.3};
      break;
    case ExperimentKind::simulate:
      break;
  }
  throw Error("experiment: no predicted rate for '" + std::string(experiment_name(cfg.kind)) +
              "' with check '" + cfg.check + "'");
}

void require_sweep(const ExperimentConfig& cfg) {
  if (cfg.sweep.values.size() < 3) {
    throw Error("experiment: a rate fit needs a sweep with at least 3 values, got " +
                std::to_string(cfg.sweep.values.size()));
  }
  if (cfg.sweep.parameter.empty()) throw Error("experiment: sweep parameter is missing");
}

// Runs f(i) for every sweep index on a small thread pool. Results land in
// axis order whatever the scheduling, and the first failure by index is rethrown.
template <typename F>
std::vector<double> map_points(std::size_t count, int threads, F&& f) {
  std::vector<double> out(count, 0.0);
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : failures) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

State initial_state(ModelId id, const UnidirectionalData& data) {
  switch (id) {
    case ModelId::WB_SYS:
      return State::system(data.zeta, data.u);
    case ModelId::REG_BO_SYS:
      return State::system(data.zeta, data.v);
    default:
      return State::scalar(data.zeta);
  }
}

std::vector<double> sweep_values(const ExperimentConfig& cfg) { return cfg.sweep.values; }

std::string sweep_label(const SweepAxis& axis) { return axis.parameter; }

}  // namespace

void ExperimentConfig::validate() const {
  Grid g = grid();
  (void)g;
  params.validate();
  stepper.validate();
  if (!(norm_s >= 0.0) || !std::isfinite(norm_s)) throw Error("experiment: norm_s must be >= 0");
  if (threads < 0) throw Error("experiment: threads must be >= 0");
  make_profile(g, initial);

  auto each_point = [this](auto&& check_point) {
    for (double v : sweep.values) {
      if (!std::isfinite(v)) throw Error("experiment: sweep values must be finite");
      check_point(sweep_point(params, sweep, v));
    }
  };

  switch (kind) {
    case ExperimentKind::simulate:
      if (models.size() != 1) throw Error("simulate: expected exactly one model");
      ModelSpec(models[0], params);
      break;
    case ExperimentKind::compare: {
      if (models.size() != 2) throw Error("compare: expected exactly two models");
      require_sweep(*this);
      const bool weak = uses_capillarity(models[0]) || uses_capillarity(models[1]);
      each_point([&](const Params& p) {
        p.validate();
        if (weak) p.validate_weak_nonlinearity();
      });
      break;
    }
    case ExperimentKind::ilw_limit:
      if (!models.empty() && !(models.size() == 2 && models[0] == ModelId::ILW && models[1] == ModelId::BO)) {
        throw Error("ilw-limit: models are fixed to [ILW, BO]");
      }
      require_sweep(*this);
      if (sweep.parameter != "mu_minus") throw Error("ilw-limit: sweep parameter must be mu_minus");
      each_point([](const Params& p) { p.validate(); });
      break;
    case ExperimentKind::multiplier_check:
      expansion_from_name(check);
      require_sweep(*this);
      each_point([](const Params& p) { p.validate(); });
      break;
    case ExperimentKind::dno_validate: {
      const auto& names = dn_checks();
      if (std::find(names.begin(), names.end(), check) == names.end()) {
        throw Error("dno-validate: unknown check '" + check + "'");
      }
      require_sweep(*this);
      if ((check == "shape_derivative") != (sweep.parameter == "nu")) {
        throw Error("dno-validate: the shape_derivative check sweeps 'nu', the others sweep a parameter");
      }
      if (check == "shape_derivative") {
        for (double v : sweep.values) {
          if (!(v > 0.0)) throw Error("dno-validate: probe steps must be positive");
        }
      }
      dno.config().plus.validate();
      dno.config().minus.validate();
      each_point([](const Params& p) { p.validate(); });
      break;
    }
  }
  if (kind != ExperimentKind::simulate) expected_exponent();
}

double ExperimentConfig::expected_exponent() const {
  return predicted_exponent ? *predicted_exponent : default_rate(*this).first;
}

double ExperimentConfig::expected_tolerance() const {
  return tolerance ? *tolerance : default_rate(*this).second;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw Error("config: '" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error("config: unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& target, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error("config: bad value for '" + std::string(key) + "' in " + where + ": " + e.what());
  }
}

// mu_minus may be the string "inf".
double read_number(const json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  throw Error("config: " + what + " must be a number");
}

json number_json(double v) {
  if (std::isinf(v) && v > 0) return "inf";
  return v;
}

}  // namespace

ExperimentConfig config_from_json(const json& doc, std::optional<ExperimentKind> kind) {
  check_keys(doc, {"experiment", "models", "params", "grid", "stepper", "norm_s", "initial", "sweep",
                   "check", "dno", "predicted_exponent", "tolerance", "threads"},
             "config");
  ExperimentConfig cfg;
  if (doc.contains("experiment")) {
    cfg.kind = experiment_from_name(doc.at("experiment").get<std::string>());
  } else if (!kind) {
    throw Error("config: missing 'experiment'");
  }
  if (kind) cfg.kind = *kind;

  if (doc.contains("models")) {
    for (const auto& m : doc.at("models")) cfg.models.push_back(model_from_name(m.get<std::string>()));
  }
  if (doc.contains("params")) {
    const json& p = doc.at("params");
    check_keys(p, {"eps", "mu", "gamma", "bo_inv", "mu_minus", "alpha"}, "params");
    for (const auto& [key, value] : p.items()) cfg.params = with_param(cfg.params, key, read_number(value, key));
  }
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    check_keys(g, {"n", "L"}, "grid");
    read(g, "n", cfg.n, "grid");
    read(g, "L", cfg.length, "grid");
  }
  if (doc.contains("stepper")) {
    const json& s = doc.at("stepper");
    check_keys(s, {"scheme", "dt", "t_end", "stride"}, "stepper");
    if (s.contains("scheme")) cfg.stepper.scheme = scheme_from_name(s.at("scheme").get<std::string>());
    read(s, "dt", cfg.stepper.dt, "stepper");
    read(s, "t_end", cfg.stepper.t_end, "stepper");
    read(s, "stride", cfg.stepper.stride, "stepper");
  }
  read(doc, "norm_s", cfg.norm_s, "config");
  if (doc.contains("initial")) {
    const json& i = doc.at("initial");
    check_keys(i, {"profile", "amplitude", "width"}, "initial");
    read(i, "profile", cfg.initial.profile, "initial");
    read(i, "amplitude", cfg.initial.amplitude, "initial");
    read(i, "width", cfg.initial.width, "initial");
  }
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    check_keys(s, {"parameter", "values", "ties"}, "sweep");
    read(s, "parameter", cfg.sweep.parameter, "sweep");
    if (s.contains("values")) {
      for (const auto& v : s.at("values")) cfg.sweep.values.push_back(read_number(v, "sweep value"));
    }
    if (s.contains("ties")) {
      for (const auto& t : s.at("ties")) {
        check_keys(t, {"parameter", "factor", "power"}, "sweep.ties");
        ParamTie tie;
        read(t, "parameter", tie.parameter, "sweep.ties");
        read(t, "factor", tie.factor, "sweep.ties");
        read(t, "power", tie.power, "sweep.ties");
        get_param(cfg.params, tie.parameter);
        cfg.sweep.ties.push_back(tie);
      }
    }
  }
  read(doc, "check", cfg.check, "config");
  if (doc.contains("dno")) {
    const json& d = doc.at("dno");
    check_keys(d, {"nz_plus", "nz_minus", "stretch", "tol"}, "dno");
    read(d, "nz_plus", cfg.dno.nz_plus, "dno");
    read(d, "nz_minus", cfg.dno.nz_minus, "dno");
    read(d, "stretch", cfg.dno.stretch, "dno");
    read(d, "tol", cfg.dno.tol, "dno");
  }
  if (doc.contains("predicted_exponent")) cfg.predicted_exponent = doc.at("predicted_exponent").get<double>();
  if (doc.contains("tolerance")) cfg.tolerance = doc.at("tolerance").get<double>();
  read(doc, "threads", cfg.threads, "config");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path, std::optional<ExperimentKind> kind) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("config: '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(doc, kind);
}

json to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["experiment"] = std::string(experiment_name(cfg.kind));
  json models = json::array();
  for (ModelId m : cfg.models) models.push_back(std::string(model_name(m)));
  doc["models"] = models;
  const Params& p = cfg.params;
  doc["params"] = {{"eps", p.eps},         {"mu", p.mu},     {"gamma", p.gamma},
                   {"bo_inv", p.bo_inv}, {"mu_minus", number_json(p.mu_minus)}, {"alpha", p.alpha}};
  doc["grid"] = {{"n", cfg.n}, {"L", cfg.length}};
  doc["stepper"] = {{"scheme", std::string(scheme_name(cfg.stepper.scheme))},
                    {"dt", cfg.stepper.dt},
                    {"t_end", cfg.stepper.t_end},
                    {"stride", cfg.stepper.stride}};
  doc["norm_s"] = cfg.norm_s;
  doc["initial"] = {{"profile", cfg.initial.profile},
                    {"amplitude", cfg.initial.amplitude},
                    {"width", cfg.initial.width}};
  json values = json::array();
  for (double v : cfg.sweep.values) values.push_back(number_json(v));
  json ties = json::array();
  for (const ParamTie& t : cfg.sweep.ties) {
    ties.push_back({{"parameter", t.parameter}, {"factor", t.factor}, {"power", t.power}});
  }
  doc["sweep"] = {{"parameter", cfg.sweep.parameter}, {"values", values}, {"ties", ties}};
  doc["check"] = cfg.check;
  doc["dno"] = {{"nz_plus", cfg.dno.nz_plus},
                {"nz_minus", cfg.dno.nz_minus},
                {"stretch", cfg.dno.stretch},
                {"tol", cfg.dno.tol}};
  if (cfg.kind != ExperimentKind::simulate) {
    doc["predicted_exponent"] = cfg.expected_exponent();
    doc["tolerance"] = cfg.expected_tolerance();
  }
  doc["threads"] = cfg.threads;
  return doc;
}

// ---------------------------------------------------------------------------
// Runs

SimulationResult run_simulate(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::simulate) throw Error("run_simulate: config is not a simulation");
  const Grid g = cfg.grid();
  const ModelId id = cfg.models.at(0);
  ModelSpec model(id, cfg.params);
  const State s0 = initial_state(id, make_unidirectional_data(make_profile(g, cfg.initial), cfg.params));
  return {id, evolve(s0, model, cfg.stepper)};
}

std::pair<State, State> comparison_states(ModelId a, ModelId b, const Field& zeta0, const Params& p) {
  const UnidirectionalData data = make_unidirectional_data(zeta0, p);
  return {initial_state(a, data), initial_state(b, data)};
}

double compare_models(ModelId a, ModelId b, const Params& p, const Grid& grid,
                      const StepperConfig& stepper, const Field& zeta0, double s) {
  if (!(zeta0.grid() == grid)) throw Error("compare: initial data lives on a different grid");
  auto [sa, sb] = comparison_states(a, b, zeta0, p);
  const Trajectory ta = evolve(sa, ModelSpec(a, p), stepper);
  const Trajectory tb = evolve(sb, ModelSpec(b, p), stepper);
  if (ta.size() != tb.size()) throw Error("compare: trajectories recorded different times");
  const NormSpec norm = NormSpec::sobolev(s);
  double worst = 0.0;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    worst = std::max(worst, iwave::norm(ta.states[i].fields[0] - tb.states[i].fields[0], norm));
  }
  return worst;
}

RateReport run_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::compare) throw Error("run_compare: config is not a comparison");
  const Grid g = cfg.grid();
  const Field zeta0 = make_profile(g, cfg.initial);
  const ModelId a = cfg.models[0], b = cfg.models[1];
  const std::vector<double> axis = sweep_values(cfg);
  std::vector<double> errors = map_points(axis.size(), cfg.threads, [&](std::size_t i) {
    return compare_models(a, b, sweep_point(cfg.params, cfg.sweep, axis[i]), g, cfg.stepper, zeta0,
                          cfg.norm_s);
  });
  std::ostringstream name;
  name << "sup_t |zeta_" << model_name(a) << " - zeta_" << model_name(b) << "|_H^" << cfg.norm_s;
  return make_rate_report(sweep_label(cfg.sweep), name.str(), axis, std::move(errors), cfg.expected_exponent(),
                          cfg.expected_tolerance());
}

RateReport run_ilw_limit(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  if (c.kind != ExperimentKind::ilw_limit) throw Error("run_ilw_limit: config is not an ILW limit study");
  c.validate();
  const Grid g = c.grid();
  const Field zeta0 = make_profile(g, c.initial);
  const std::vector<double> axis = sweep_values(c);
  std::vector<double> errors = map_points(axis.size(), c.threads, [&](std::size_t i) {
    return compare_models(ModelId::ILW, ModelId::BO, sweep_point(c.params, c.sweep, axis[i]), g, c.stepper,
                          zeta0, c.norm_s);
  });
  std::ostringstream name;
  name << "sup_t |zeta_ILW - zeta_BO|_H^" << c.norm_s;
  return make_rate_report("mu_minus", name.str(), axis, std::move(errors), c.expected_exponent(),
                          c.expected_tolerance());
}

RateReport run_multiplier_check(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::multiplier_check) throw Error("run_multiplier_check: wrong experiment kind");
  const ExpansionId id = expansion_from_name(cfg.check);
  const Field f = make_profile(cfg.grid(), cfg.initial);
  const std::vector<double> axis = sweep_values(cfg);
  std::vector<double> gaps = map_points(axis.size(), cfg.threads, [&](std::size_t i) {
    return expansion_gap(id, f, sweep_point(cfg.params, cfg.sweep, axis[i]), cfg.norm_s);
  });
  return make_rate_report(sweep_label(cfg.sweep), std::string(expansion_name(id)) + " ratio", axis,
                          std::move(gaps), cfg.expected_exponent(), cfg.expected_tolerance());
}

RateReport run_dno_validate(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::dno_validate) throw Error("run_dno_validate: wrong experiment kind");
  const Grid g = cfg.grid();
  const Field zeta = make_profile(g, cfg.initial);
  const double kappa = g.dxi();
  const Field psi = Field::sample(g, [kappa](double x) { return std::sin(kappa * x) + 0.5 * std::cos(2 * kappa * x); });
  const DnConfig dn = cfg.dno.config();
  const std::vector<double> axis = sweep_values(cfg);
  std::vector<double> errors;
  if (cfg.check == "shape_derivative") {
    const Field h = Field::sample(g, [kappa](double x) { return std::cos(kappa * x) + 0.3 * std::sin(2 * kappa * x); });
    errors = map_points(axis.size(), cfg.threads, [&](std::size_t i) {
      return shape_derivative_check(zeta, h, psi, cfg.params, dn.plus, axis[i]).rel_err;
    });
  } else {
    errors = map_points(axis.size(), cfg.threads, [&](std::size_t i) {
      const Params p = sweep_point(cfg.params, cfg.sweep, axis[i]);
      if (cfg.check == "Gp_tail" || cfg.check == "Gm_flat") {
        return symbolic_check(zeta, psi, p, dn, symbolic_check_from_name(cfg.check), cfg.norm_s);
      }
      return expansion_check(zeta, psi, p, dn, expansion_check_from_name(cfg.check), cfg.norm_s);
    });
  }
  return make_rate_report(sweep_label(cfg.sweep), cfg.check + " error", axis, std::move(errors),
                          cfg.expected_exponent(), cfg.expected_tolerance());
}

RateReport run_sweep(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::compare:
      return run_compare(cfg);
    case ExperimentKind::ilw_limit:
      return run_ilw_limit(cfg);
    case ExperimentKind::multiplier_check:
      return run_multiplier_check(cfg);
    case ExperimentKind::dno_validate:
      return run_dno_validate(cfg);
    case ExperimentKind::simulate:
      break;
  }
  throw Error("run_sweep: simulate is not a sweep experiment");
}

}  // namespace iwave

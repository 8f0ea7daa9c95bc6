// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Usage: acceptance <config-dir> <cli-executable>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "iwave/dno.hpp"
#include "iwave/experiments.hpp"
#include "iwave/integrator.hpp"
#include "iwave/spectral.hpp"
#include "iwave/symbols.hpp"
#include "oracles.hpp"

using namespace iwave;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string fixed(double v, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double rel(const Field& a, const Field& b) { return l2_norm(a - b) / l2_norm(b); }

fs::path g_configs;
fs::path g_cli;

ExperimentConfig config(const std::string& name) { return load_config((g_configs / (name + ".json")).string()); }

void rate_line(Outcome& o, const std::string& label, const RateReport& r) {
  o.detail << label << " slope " << fixed(r.fit.slope) << " (" << fixed(r.predicted_exponent, 2) << " +/- "
           << fixed(r.tolerance, 2) << "); ";
  o.require(r.pass, label + " slope");
}

// ---------------------------------------------------------------------------

void spectral_substrate(Outcome& o) {
  Grid g = make_grid(256, 17.0);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  const Params p{0.1, 0.3, 0.5, 0.1, 10.0, 0.0};
  auto t = symbol(SymbolId::t, p);
  auto t_inv = symbol(SymbolId::t_inv_half, p);
  auto dx = [](double xi) { return std::complex<double>(0.0, xi); };
  double round_trip = 0.0, compose = 0.0, inverse = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd v(g.size());
    for (auto& x : v) x = normal(rng);
    Field f(g, v);
    round_trip = std::max(round_trip, oracle::rel_l2(Field::from_spectrum(g, f.spectrum()).values(), v));
    Field a = apply_multiplier(apply_multiplier(f, t), dx);
    Field b = apply_multiplier(f, [&](double xi) { return dx(xi) * t(xi); });
    compose = std::max(compose, rel(a, b));
    // t · (t^{-1/2})² = 1
    Field c = apply_multiplier(apply_multiplier(apply_multiplier(f, t_inv), t_inv), t);
    inverse = std::max(inverse, rel(c, f));
  }
  o.detail << "round trip " << sci(round_trip) << ", composition " << sci(compose) << ", inverse "
           << sci(inverse) << " over 1000 fields";
  o.require(round_trip <= 1e-12 && compose <= 1e-12 && inverse <= 1e-12, "1e-12 relative");
}

void multiplier_expansions(Outcome& o) {
  for (const char* name : {"multiplier_est_T", "multiplier_inv_tanh", "multiplier_precise_sqrtK"}) {
    ExperimentConfig cfg = config(name);
    o.require(cfg.n == 512, "n = 512");
    rate_line(o, cfg.check, run_sweep(cfg));
  }
}

void flat_dn(Outcome& o) {
  Grid g = make_grid(256, 2 * pi);
  Params p;
  p.eps = 0.0;
  p.mu = 1.0;
  p.gamma = 0.5;
  std::mt19937_64 rng(3);
  Field psi = oracle::random_field(g, rng, 16, 0.05, true);
  DnConfig c;
  c.plus = StripConfig::plus_side(64);
  c.minus = StripConfig::minus_side(64);
  const Field zero = Field::zeros(g);
  const double ep = rel(dn_plus(zero, psi, p, c.plus), apply_multiplier(psi, symbol(SymbolId::Gp0, p)));
  const double em = rel(dn_minus(zero, psi, p, c.minus), apply_multiplier(psi, symbol(SymbolId::Gm0, p)));
  const double eg = rel(dn_coupled(zero, psi, p, c), apply_multiplier(psi, symbol(SymbolId::G0, p)));
  o.detail << "G+ " << sci(ep) << ", G " << sci(eg) << ", G- " << sci(em) << " on 256x64, modes |k| <= 16";
  o.require(ep <= 1e-8, "G+ 1e-8");
  o.require(eg <= 1e-8, "G 1e-8");
  o.require(em <= 1e-6, "G- 1e-6");
}

void dn_structure(Outcome& o) {
  Grid g = make_grid(128, 2 * pi);
  Params p;
  p.eps = 0.05;
  p.mu = 0.5;
  p.gamma = 0.5;
  DnConfig c;
  c.plus = StripConfig::plus_side(32);
  c.minus = StripConfig::minus_side(48);
  const double w = g.length() / 12.0;
  const Field zeta = Field::sample(g, [w](double x) { return std::exp(-(x / w) * (x / w)); });
  // Coercivity reference: (ψ, 𝒢ψ) ≥ c μ |𝔓ψ|², 𝔓 = |D|(1 + √μ|D|)^{-1/2}. For the
  // flat symbol c ≥ 0.7/(1 + γ); the bump perturbs it by O(ε).
  const double c_floor = 0.5 / (1.0 + p.gamma);
  std::mt19937_64 rng(11);
  double sym_plus = 0.0, sym_coupled = 0.0, worst_minus = -1e300, worst_coercive = 1e300;
  for (int pair = 0; pair < 20; ++pair) {
    Field a = oracle::random_field(g, rng, 12, 0.15, true);
    Field b = oracle::random_field(g, rng, 12, 0.15, true);
    const Field gpa = dn_plus(zeta, a, p, c.plus), gpb = dn_plus(zeta, b, p, c.plus);
    sym_plus = std::max(sym_plus, std::abs(inner(a, gpb) - inner(b, gpa)) / (l2_norm(a) * l2_norm(gpb)));
    const Field ga = dn_coupled(zeta, a, p, c), gb = dn_coupled(zeta, b, p, c);
    sym_coupled = std::max(sym_coupled, std::abs(inner(a, gb) - inner(b, ga)) / (l2_norm(a) * l2_norm(gb)));
    const Field gma = dn_minus(zeta, a, p, c.minus);
    worst_minus = std::max(worst_minus, inner(a, gma) / (l2_norm(a) * l2_norm(gma)));
    const Field pa = apply_multiplier(a, symbol(SymbolId::P_frak, p));
    worst_coercive = std::min(worst_coercive, inner(a, ga) / (p.mu * std::pow(l2_norm(pa), 2)));
  }
  o.detail << "symmetry G+ " << sci(sym_plus) << ", G " << sci(sym_coupled) << "; max (a,G-a)/|a||G-a| "
           << fixed(worst_minus, 3) << "; min (a,Ga)/(mu|Pa|^2) " << fixed(worst_coercive, 3)
           << " over 20 pairs";
  o.require(sym_plus <= 1e-8, "G+ symmetry");
  o.require(sym_coupled <= 1e-8, "G symmetry");
  o.require(worst_minus <= 1e-8, "G- negativity");
  o.require(worst_coercive >= c_floor - 1e-8, "G coercivity");
}

void shape_derivative(Outcome& o) {
  ExperimentConfig cfg = config("dno_shape_derivative");
  const Grid g = cfg.grid();
  const Field zeta = make_profile(g, cfg.initial);
  const double k = g.dxi();
  const Field h = Field::sample(g, [k](double x) { return std::cos(k * x) + 0.3 * std::sin(2 * k * x); });
  const Field psi = Field::sample(g, [k](double x) { return std::sin(k * x) + 0.5 * std::cos(2 * k * x); });
  const StripConfig strip = cfg.dno.config().plus;
  const double e1 = shape_derivative_check(zeta, h, psi, cfg.params, strip, 1e-3).rel_err;
  const double e2 = shape_derivative_check(zeta, h, psi, cfg.params, strip, 5e-4).rel_err;
  const double order = std::log2(e1 / e2);
  o.detail << "rel err " << sci(e1) << " at nu = 1e-3, " << sci(e2) << " at 5e-4, observed order " << fixed(order, 2);
  o.require(e1 <= 1e-4, "1e-4 at nu = 1e-3");
  o.require(std::abs(order - 2.0) <= 0.3, "O(nu^2)");
}

void expansion_scalings(Outcome& o) {
  for (const char* name : {"dno_Gp_shallow", "dno_H_interface", "dno_Gm_flat"}) {
    ExperimentConfig cfg = config(name);
    o.require(cfg.sweep.values.size() == 4, "4 sweep points");
    rate_line(o, cfg.check, run_sweep(cfg));
  }
}

State start(ModelId id, const Grid& g, const Params& p) {
  Field z = make_profile(g, InitialData{});
  if (model_field_count(id) == 1) return State::scalar(z);
  UnidirectionalData d = make_unidirectional_data(z, p);
  return State::system(z, id == ModelId::WB_SYS ? d.u : d.v);
}

double state_diff(const State& a, const State& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.fields.size(); ++i) acc += std::pow(l2_norm(a.fields[i] - b.fields[i]), 2);
  return std::sqrt(acc);
}

void integrator(Outcome& o) {
  Grid g = make_grid(256, 40.0);
  Params p;
  p.eps = 0.1;
  p.mu = 0.1;
  p.gamma = 0.5;
  p.bo_inv = 0.05;
  for (ModelId id : {ModelId::BO, ModelId::WB_SYS}) {
    for (Scheme scheme : {Scheme::IF_RK4, Scheme::ETD_RK4}) {
      ModelSpec m(id, p);
      State s = start(id, g, p);
      std::vector<State> finals;
      for (double dt : {0.1, 0.05, 0.025}) finals.push_back(evolve(s, m, {scheme, dt, 1.0, 1000}).states.back());
      const double ratio = state_diff(finals[0], finals[1]) / state_diff(finals[1], finals[2]);
      o.detail << model_name(id) << "/" << scheme_name(scheme) << " ratio " << fixed(ratio, 1) << "; ";
      o.require(std::abs(ratio - 16.0) <= 0.2 * 16.0, "Richardson ratio");
    }
  }

  // ε = 0: ζ̂(t) = exp(-iξ m(ξ) t) ζ̂(0) mode by mode, with m the BO dispersion.
  Params lin = p;
  lin.eps = 0.0;
  const State s0 = start(ModelId::BO, g, lin);
  const Trajectory tr = evolve(s0, ModelSpec(ModelId::BO, lin), {Scheme::ETD_RK4, 0.01, 1.0, 10});
  double lin_err = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    Eigen::VectorXcd spec = s0.fields[0].spectrum();
    for (int k = 0; k < g.size(); ++k) {
      const double xi = g.wavenumber(k);
      const double m = 1.0 - 0.5 * lin.gamma * std::sqrt(lin.mu) * std::abs(xi);
      spec[k] *= k == g.nyquist_index() ? 1.0 : std::exp(std::complex<double>(0.0, -xi * m * tr.times[i]));
    }
    lin_err = std::max(lin_err, rel(tr.states[i].fields[0], Field::from_spectrum(g, spec)));
  }
  o.detail << "linear flow " << sci(lin_err) << "; ";
  o.require(lin_err <= 1e-12, "linear exactness");

  ExperimentConfig sim = config("simulate_bo");
  o.require(sim.n == 512 && sim.stepper.dt == 1e-3 && sim.stepper.t_end == 1.0, "simulation config");
  const SimulationResult r = run_simulate(sim);
  const Observables& first = r.trajectory.observables.front();
  const Observables& last = r.trajectory.observables.back();
  const double mass = std::abs(last.mass[0] - first.mass[0]);
  const double momentum = std::abs(last.momentum - first.momentum);
  o.detail << "BO drift: mass " << sci(mass) << ", momentum " << sci(momentum);
  o.require(mass < 1e-10, "mass drift");
  o.require(momentum < 1e-8, "momentum drift");
}

void soliton(Outcome& o) {
  Grid g = make_grid(512, 40.0);
  Params p;
  p.eps = 0.1;
  p.mu = 0.1;
  p.gamma = 0.5;
  const Field z = bo_soliton(g, 1.0, 0.0, p);
  const double c = bo_soliton_speed(g, 1.0, p);
  const double residual = l2_norm(derivative(z) * c + rhs_bo(State::scalar(z), p)[0]) / l2_norm(z);
  const Trajectory tr =
      evolve(State::scalar(z), ModelSpec(ModelId::BO, p), {Scheme::IF_RK4, 0.01, g.length() / c, 100000});
  const double transit = rel(tr.states.back().fields[0], z);
  o.detail << "residual " << sci(residual) << ", error after one transit " << sci(transit);
  o.require(residual < 1e-6, "travelling-wave residual");
  o.require(transit < 1e-3, "transit error");
}

void model_convergence(Outcome& o) {
  for (const char* name : {"compare_benjamin_bo", "compare_wb_benjamin", "ilw_limit"}) {
    ExperimentConfig cfg = config(name);
    o.require(cfg.n == 512 && cfg.stepper.t_end == 1.0 && cfg.sweep.values.size() == 4, "sweep setup");
    std::string label = cfg.kind == ExperimentKind::ilw_limit
                            ? std::string("ILW/BO")
                            : std::string(model_name(cfg.models[0])) + "/" + std::string(model_name(cfg.models[1]));
    rate_line(o, label, run_sweep(cfg));
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void cli_determinism(Outcome& o) {
  const fs::path work = fs::temp_directory_path() / "iwave_acceptance_cli";
  fs::remove_all(work);
  std::vector<fs::path> configs;
  for (const auto& e : fs::directory_iterator(g_configs)) {
    if (e.path().extension() == ".json") configs.push_back(e.path());
  }
  std::sort(configs.begin(), configs.end());
  int files = 0;
  for (const fs::path& cfg : configs) {
    const std::string kind(experiment_name(load_config(cfg.string()).kind));
    for (const char* run : {"a", "b"}) {
      const fs::path out = work / cfg.stem() / run;
      const std::string cmd = "\"" + g_cli.string() + "\" " + kind + " --config \"" + cfg.string() + "\" --out \"" +
                              out.string() + "\" --quiet";
      const int rc = std::system(cmd.c_str());
      o.require(rc == 0, cfg.stem().string() + " exit status");
    }
    for (const auto& e : fs::directory_iterator(work / cfg.stem() / "a")) {
      const auto ext = e.path().extension();
      if (ext != ".csv" && ext != ".json") continue;
      ++files;
      o.require(slurp(e.path()) == slurp(work / cfg.stem() / "b" / e.path().filename()),
                cfg.stem().string() + "/" + e.path().filename().string());
    }
  }
  o.detail << files << " CSV/JSON files from " << configs.size() << " configs identical across two runs";
  fs::remove_all(work);
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <config-dir> <cli-executable>\n";
    return 1;
  }
  g_configs = argv[1];
  g_cli = argv[2];

  const std::vector<Criterion> criteria{
      {1, "spectral substrate", 5, spectral_substrate},
      {2, "multiplier expansions", 5, multiplier_expansions},
      {3, "flat DN validation", 30, flat_dn},
      {4, "DN structure", 60, dn_structure},
      {5, "shape derivative", 60, shape_derivative},
      {6, "expansion scalings", 180, expansion_scalings},
      {7, "integrator", 60, integrator},
      {8, "soliton", 60, soliton},
      {9, "model convergence exponents", 300, model_convergence},
      {10, "CLI determinism", 10, cli_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(seconds < c.budget_seconds, "runtime budget " + fixed(c.budget_seconds, 0) + " s");
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): " << o.detail.str()
              << " [" << fixed(seconds, 2) << " s]" << std::endl;
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "iwave/emit.hpp"
#include "iwave/error.hpp"
#include "iwave/experiments.hpp"
#include "iwave/rate.hpp"
#include "iwave/spectral.hpp"

using namespace iwave;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json compare_doc() {
  return json::parse(R"({
    "experiment": "compare",
    "models": ["BENJAMIN", "BO"],
    "params": {"eps": 0.1, "gamma": 0.5, "mu": 0.1, "bo_inv": 0.1},
    "grid": {"n": 128, "L": 40},
    "stepper": {"scheme": "ETD_RK4", "dt": 0.05, "t_end": 0.5, "stride": 2},
    "sweep": {"parameter": "bo_inv", "values": [0.2, 0.1, 0.05],
              "ties": [{"parameter": "mu", "factor": 1, "power": 1}]}
  })");
}

fs::path scratch_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("iwave_test_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("fit_rate recovers exact and noisy power laws") {
  std::vector<double> x{0.2, 0.1, 0.05, 0.025}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.5));
  RateFit f = fit_rate(x, y);
  CHECK(f.slope == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-14));

  RateFit flat = fit_rate(x, {2.0, 2.0, 2.0, 2.0});
  CHECK(std::abs(flat.slope) < 1e-14);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  std::vector<double> ax, noisy;
  for (int i = 0; i < 8; ++i) {
    ax.push_back(std::pow(2.0, -i));
    noisy.push_back(std::pow(ax.back(), 0.5) * (1.0 + noise(rng)));
  }
  CHECK(std::abs(fit_rate(ax, noisy).slope - 0.5) < 0.1);
}

TEST_CASE("fit_rate rejects bad input") {
  CHECK_THROWS_AS(fit_rate({1, 2}, {1, 2}), Error);
  CHECK_THROWS_AS(fit_rate({1, 2, 3}, {1, 0, 2}), Error);
  CHECK_THROWS_AS(fit_rate({1, -2, 3}, {1, 1, 2}), Error);
  CHECK_THROWS_AS(fit_rate({1, 3, 2}, {1, 1, 2}), Error);
  CHECK_THROWS_AS(fit_rate({1, 1, 2}, {1, 1, 2}), Error);
  CHECK_THROWS_AS(fit_rate({1, 2, 3}, {1, 2}), Error);
  CHECK_NOTHROW(fit_rate({3, 2, 1}, {1, 2, 3}));
}

TEST_CASE("rate report judges against its tolerance") {
  RateReport r = make_rate_report("mu", "gap", {1, 2, 4}, {1, 2, 4}, 1.2, 0.25);
  CHECK(r.pass);
  CHECK(r.predicted_exponent == 1.2);
  CHECK(r.tolerance == 0.25);
  CHECK_FALSE(make_rate_report("mu", "gap", {1, 2, 4}, {1, 2, 4}, 1.3, 0.25).pass);
}

TEST_CASE("config loading is strict") {
  ExperimentConfig cfg = config_from_json(compare_doc());
  CHECK(cfg.kind == ExperimentKind::compare);
  CHECK(cfg.models.size() == 2);
  CHECK(cfg.sweep.ties.size() == 1);
  CHECK(cfg.expected_exponent() == 1.0);
  CHECK(cfg.expected_tolerance() == 0.25);

  json bad = compare_doc();
  bad["colour"] = "blue";
  CHECK_THROWS_AS(config_from_json(bad), Error);
  bad = compare_doc();
  bad["params"]["viscosity"] = 1.0;
  CHECK_THROWS_AS(config_from_json(bad), Error);
  bad = compare_doc();
  bad["params"]["mu"] = -1.0;
  CHECK_THROWS_AS(config_from_json(bad), Error);
  bad = compare_doc();
  bad["models"] = {"BO"};
  CHECK_THROWS_AS(config_from_json(bad), Error);
  bad = compare_doc();
  bad["sweep"]["values"] = {0.1, 0.05};
  CHECK_THROWS_AS(config_from_json(bad), Error);
  // ε² ≤ bo⁻¹ is enforced at every sweep point of a capillary comparison.
  bad = compare_doc();
  bad["params"]["eps"] = 0.3;
  CHECK_THROWS_AS(config_from_json(bad), Error);
  bad = compare_doc();
  bad.erase("experiment");
  CHECK_THROWS_AS(config_from_json(bad), Error);
  CHECK(config_from_json(bad, ExperimentKind::compare).kind == ExperimentKind::compare);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("config echo round-trips") {
  ExperimentConfig cfg = config_from_json(compare_doc());
  json once = to_json(cfg);
  json twice = to_json(config_from_json(once));
  CHECK(once == twice);
  CHECK(once["params"]["mu_minus"] == 10.0);
  json inf_doc = compare_doc();
  inf_doc["params"]["mu_minus"] = "inf";
  CHECK(to_json(config_from_json(inf_doc))["params"]["mu_minus"] == "inf");
}

TEST_CASE("sweep points follow ties") {
  SweepAxis axis{"mu", {0.04}, {{"bo_inv", 2.0, 0.5}}};
  Params p = sweep_point(Params{}, axis, 0.04);
  CHECK(p.mu == 0.04);
  CHECK(p.bo_inv == doctest::Approx(0.4));
  SweepAxis probe{"nu", {1e-3}, {}};
  CHECK(sweep_point(Params{}, probe, 1e-3).mu == Params{}.mu);
}

TEST_CASE("initial profiles") {
  Grid g = make_grid(256, 40.0);
  Field f = make_profile(g, InitialData{});
  CHECK(std::abs(f.mean()) < 1e-15);
  // The default width is L/20.
  const double w = 2.0;
  Field raw = make_profile(g, {"bump", 1.0, 0.0});
  CHECK(raw[128] == doctest::Approx(1.0));
  CHECK(raw[128 + 10] == doctest::Approx(std::exp(-(10 * g.spacing() / w) * (10 * g.spacing() / w))));
  CHECK(std::abs(make_profile(g, {"sech2", 0.5, 3.0}).mean()) < 1e-15);
  CHECK_THROWS_AS(make_profile(g, {"square", 1.0, 0.0}), Error);
  CHECK_THROWS_AS(make_profile(g, {"bump", 1.0, -1.0}), Error);
}

TEST_CASE("comparison of a model with itself is zero and the metric is symmetric") {
  Grid g = make_grid(128, 40.0);
  Params p;
  p.eps = 0.1;
  p.bo_inv = 0.05;
  StepperConfig st{Scheme::ETD_RK4, 0.05, 0.5, 2};
  Field z0 = make_profile(g, InitialData{});
  CHECK(compare_models(ModelId::BO, ModelId::BO, p, g, st, z0, 2.0) <= 1e-12);
  const double ab = compare_models(ModelId::BENJAMIN, ModelId::BO, p, g, st, z0, 2.0);
  const double ba = compare_models(ModelId::BO, ModelId::BENJAMIN, p, g, st, z0, 2.0);
  CHECK(ab > 1e-6);
  CHECK(ab == ba);
  CHECK(compare_models(ModelId::WB_SYS, ModelId::REG_BO_SYS, p, g, st, z0, 2.0) > 0.0);
}

TEST_CASE("ILW against BO: infinite depth and the linear single-mode gap") {
  Grid g = make_grid(64, 2 * std::numbers::pi);
  StepperConfig st{Scheme::ETD_RK4, 0.01, 1.0, 10};
  Params p;
  p.eps = 0.1;
  p.mu = 0.1;
  p.gamma = 0.5;
  p.mu_minus = std::numeric_limits<double>::infinity();
  Field z0 = make_profile(g, {"gaussian", 1.0, 0.6});
  CHECK(compare_models(ModelId::ILW, ModelId::BO, p, g, st, z0, 2.0) < 1e-12);

  // ε = 0: both models rotate a single mode at their own phase speed.
  p.eps = 0.0;
  p.mu_minus = 4.0;
  for (int m : {1, 3}) {
    Field cosm = Field::sample(g, [m](double x) { return std::cos(m * x); });
    const double beta = 0.5 * p.gamma * std::sqrt(p.mu);
    const double a = std::sqrt(p.mu_minus);
    const double c_ilw = 1.0 - beta * (m / std::tanh(a * m) - 1.0 / a);
    const double c_bo = 1.0 - beta * m;
    const double amp = 2.0 * std::abs(std::sin(0.5 * m * (c_ilw - c_bo) * st.t_end));
    const double expected = amp * std::sqrt(g.length() / 2.0) * (1.0 + m * m);
    CHECK(compare_models(ModelId::ILW, ModelId::BO, p, g, st, cosm, 2.0) ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("sweeps are independent of the worker count") {
  ExperimentConfig cfg = config_from_json(compare_doc());
  cfg.threads = 1;
  RateReport serial = run_compare(cfg);
  cfg.threads = 3;
  RateReport parallel = run_compare(cfg);
  CHECK(serial.errors == parallel.errors);
  CHECK(serial.fit.slope == parallel.fit.slope);
}

TEST_CASE("multiplier and DN sweeps through the experiment layer") {
  json m = json::parse(R"({
    "experiment": "multiplier-check", "check": "est_T",
    "params": {"gamma": 0.5}, "grid": {"n": 256, "L": 80},
    "sweep": {"parameter": "mu", "values": [0.2, 0.1, 0.05, 0.025]}})");
  RateReport r = run_sweep(config_from_json(m));
  CHECK(r.pass);
  CHECK(r.predicted_exponent == 1.0);

  json d = json::parse(R"({
    "experiment": "dno-validate", "check": "Gp_shallow", "norm_s": 0,
    "params": {"eps": 0.1, "mu": 0.2}, "grid": {"n": 64, "L": 40},
    "initial": {"profile": "bump", "width": 5}, "dno": {"nz_plus": 24, "nz_minus": 24},
    "sweep": {"parameter": "mu", "values": [0.2, 0.1, 0.05]}})");
  RateReport rd = run_sweep(config_from_json(d));
  CHECK(rd.fit.slope == doctest::Approx(2.0).epsilon(0.15));
  d["check"] = "shape_derivative";
  CHECK_THROWS_AS(config_from_json(d), Error);
  d["check"] = "G_everything";
  CHECK_THROWS_AS(config_from_json(d), Error);
}

TEST_CASE("CSV output: header, format and parse-back") {
  Trajectory empty;
  std::ostringstream os;
  write_trajectory_csv(os, empty, 2);
  CHECK(os.str() == "time,mass_0,mass_1,momentum,l2_0,l2_1\n");

  RateReport r = make_rate_report("mu", "gap", {0.2, 0.1, 0.05}, {1.0 / 3.0, 0.1234567890123456789, 2e-300},
                                  1.0, 0.5);
  std::ostringstream csv;
  write_rate_csv(csv, r);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "mu,error");
  for (std::size_t i = 0; i < r.axis.size(); ++i) {
    std::getline(in, line);
    const auto comma = line.find(',');
    CHECK(std::stod(line.substr(0, comma)) == r.axis[i]);
    CHECK(std::stod(line.substr(comma + 1)) == r.errors[i]);
  }
  CHECK(csv.str().find('\r') == std::string::npos);
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("JSON and SVG output") {
  ExperimentConfig cfg = config_from_json(compare_doc());
  RateReport r = make_rate_report("bo_inv", "gap", {0.2, 0.1, 0.05}, {0.2, 0.1, 0.05}, 1.0, 0.25);
  json doc = rate_json(r, cfg);
  for (const char* key : {"slope", "predicted_exponent", "pass", "tolerance", "config", "r2"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc["pass"] == true);
  CHECK(doc["config"]["experiment"] == "compare");

  std::ostringstream svg;
  write_rate_svg(svg, r);
  CHECK(svg.str().rfind("<svg", 0) == 0);
  CHECK(svg.str().find("<polyline") != std::string::npos);
  CHECK(svg.str().find("</svg>") != std::string::npos);
}

TEST_CASE("emit writes files deterministically and reports unwritable paths") {
  ExperimentConfig cfg = config_from_json(compare_doc());
  RateReport r = run_compare(cfg);
  const fs::path a = scratch_dir("emit_a"), b = scratch_dir("emit_b");
  auto files_a = emit(r, cfg, a, "compare", {Format::csv, Format::json, Format::svg});
  auto files_b = emit(run_compare(cfg), cfg, b, "compare", {Format::csv, Format::json, Format::svg});
  REQUIRE(files_a.size() == 3);
  for (std::size_t i = 0; i < files_a.size(); ++i) CHECK(slurp(files_a[i]) == slurp(files_b[i]));

  const fs::path blocker = scratch_dir("emit_blocker");
  std::ofstream(blocker) << "x";
  CHECK_THROWS_AS(emit(r, cfg, blocker / "sub", "compare", {Format::csv}), Error);
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove(blocker);
}

TEST_CASE("simulation output") {
  json s = json::parse(R"({
    "experiment": "simulate", "models": ["WB_SYS"],
    "params": {"eps": 0.1, "mu": 0.1, "bo_inv": 0.05},
    "grid": {"n": 128, "L": 40}, "stepper": {"dt": 0.05, "t_end": 0.5, "stride": 5}})");
  ExperimentConfig cfg = config_from_json(s);
  SimulationResult r = run_simulate(cfg);
  CHECK(r.trajectory.size() == 3);
  const fs::path d = scratch_dir("sim");
  auto files = emit(r, cfg, d, "simulate", {Format::csv, Format::json, Format::svg});
  CHECK(files.size() == 4);
  json doc = json::parse(slurp(d / "simulate.json"));
  CHECK(doc["records"] == 3);
  CHECK(std::abs(doc["mass_drift"][0].get<double>()) < 1e-12);
  fs::remove_all(d);
}

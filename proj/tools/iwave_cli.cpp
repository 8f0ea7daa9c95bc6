// Command-line driver for the experiment layer.
//
// Exit codes: 0 when the run passes, 2 when a rate check fails, 1 on any error.

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iwave/emit.hpp"
#include "iwave/error.hpp"
#include "iwave/experiments.hpp"

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::vector<std::string> formats{"csv", "json", "svg"};
  bool quiet = false;
};

std::vector<iwave::Format> parse_formats(const std::vector<std::string>& names) {
  std::vector<iwave::Format> out;
  for (const auto& n : names) {
    if (n == "csv") out.push_back(iwave::Format::csv);
    else if (n == "json") out.push_back(iwave::Format::json);
    else if (n == "svg") out.push_back(iwave::Format::svg);
    else throw iwave::Error("unknown output format '" + n + "'");
  }
  return out;
}

int run(iwave::ExperimentKind kind, const Options& opt) {
  const iwave::ExperimentConfig cfg = iwave::load_config(opt.config, kind);
  const auto formats = parse_formats(opt.formats);
  const std::string stem(iwave::experiment_name(kind));
  if (kind == iwave::ExperimentKind::simulate) {
    const iwave::SimulationResult r = iwave::run_simulate(cfg);
    iwave::emit(r, cfg, opt.out, stem, formats);
    if (!opt.quiet) {
      std::cout << "simulate " << iwave::model_name(r.model) << ": " << r.trajectory.size()
                << " records up to t = " << r.trajectory.times.back() << "\n";
    }
    return 0;
  }
  const iwave::RateReport r = iwave::run_sweep(cfg);
  iwave::emit(r, cfg, opt.out, stem, formats);
  if (!opt.quiet) {
    std::cout << stem << ": slope " << r.fit.slope << " (R^2 " << r.fit.r2 << "), predicted "
              << r.predicted_exponent << " +/- " << r.tolerance << " -> " << (r.pass ? "PASS" : "FAIL")
              << "\n";
  }
  return r.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-layer internal wave models: simulations, model comparisons and operator checks"};
  app.require_subcommand(1);
  Options opt;

  const std::vector<std::pair<iwave::ExperimentKind, std::string>> commands{
      {iwave::ExperimentKind::simulate, "Evolve one model and record conserved quantities"},
      {iwave::ExperimentKind::compare, "Compare two models along a parameter sweep and fit the rate"},
      {iwave::ExperimentKind::ilw_limit, "Compare ILW with BO along a sweep of mu_minus"},
      {iwave::ExperimentKind::dno_validate, "Check a Dirichlet-Neumann operator approximation rate"},
      {iwave::ExperimentKind::multiplier_check, "Check a Fourier multiplier expansion rate"},
  };
  std::vector<std::pair<CLI::App*, iwave::ExperimentKind>> subs;
  for (const auto& [kind, description] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(iwave::experiment_name(kind)), description);
    sub->add_option("--config", opt.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory (created when missing)");
    sub->add_option("--format", opt.formats, "Output formats among csv, json, svg")->delimiter(',');
    sub->add_flag("--quiet", opt.quiet, "Suppress the summary line");
    subs.emplace_back(sub, kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const auto& [sub, kind] : subs) {
      if (sub->parsed()) return run(kind, opt);
    }
  } catch (const iwave::StepError& e) {
    std::cerr << "error: " << e.what() << " (step " << e.step() << ", t = " << e.time() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

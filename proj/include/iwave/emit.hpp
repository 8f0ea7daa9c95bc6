#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "iwave/experiments.hpp"
#include "iwave/integrator.hpp"
#include "iwave/rate.hpp"

namespace iwave {

enum class Format { csv, json, svg };

/// Shortest round-trip formatting ("%.17g"), independent of the C++ locale.
std::string format_number(double v);

/// Header "<axis>,error", then one row per sweep point.
void write_rate_csv(std::ostream& out, const RateReport& r);
/// Header "time,mass_0,...,momentum,l2_0,..."; an empty trajectory gives the header only.
void write_trajectory_csv(std::ostream& out, const Trajectory& t, int field_count);
/// Header "x,field_0,..." for one state.
void write_state_csv(std::ostream& out, const State& s);

nlohmann::json rate_json(const RateReport& r, const ExperimentConfig& cfg);
nlohmann::json simulation_json(const SimulationResult& r, const ExperimentConfig& cfg);

/// Measured points plus the fitted power law, on log-log axes when `log_axes`.
void write_rate_svg(std::ostream& out, const RateReport& r, bool log_axes = true);
/// Per-field L² norm against time.
void write_trajectory_svg(std::ostream& out, const Trajectory& t);

/// Writes <dir>/<stem>.{csv,json,svg} for the requested formats and returns the
/// paths written. Throws iwave::Error when a file cannot be written.
std::vector<std::filesystem::path> emit(const RateReport& r, const ExperimentConfig& cfg,
                                        const std::filesystem::path& dir, const std::string& stem,
                                        const std::vector<Format>& formats);
/// Also writes <stem>_final.csv with the last state.
std::vector<std::filesystem::path> emit(const SimulationResult& r, const ExperimentConfig& cfg,
                                        const std::filesystem::path& dir, const std::string& stem,
                                        const std::vector<Format>& formats);

}  // namespace iwave

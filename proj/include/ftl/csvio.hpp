#pragma once

#include "ftl/residuals.hpp"
#include "ftl/sweep.hpp"
#include "ftl/trajectory.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ftl {

/// All numeric output is printed with 17 significant digits so regression
/// diffs across platforms and languages stay meaningful.
std::string fmt17(double v);

// --- config files: flat `key = value` text, '#' comments, arrays space
// separated; parse errors name the line and field. -------------------------

std::string serialize_config(const ParticleSystemConfig& cfg);
ParticleSystemConfig parse_config_text(const std::string& text, const std::string& origin);
ParticleSystemConfig load_config_file(const std::filesystem::path& path);
/// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string config_hash_hex(const ParticleSystemConfig& cfg);

std::string serialize_plan(const SweepPlan& plan);
SweepPlan parse_plan_text(const std::string& text, const std::string& origin);
SweepPlan load_plan_file(const std::filesystem::path& path);

// --- CSV bodies (deterministic; no timestamps) -----------------------------

void write_trajectory_csv(const std::filesystem::path& path, const TrajectorySet& traj);
TrajectorySet read_trajectory_csv(const std::filesystem::path& path,
                                  const ValidatedConfig& config);

void write_field_csv(const std::filesystem::path& path, const PiecewiseField& field);

void write_residuals_csv(const std::filesystem::path& path,
                         const std::vector<ResidualReportRow>& rows);
/// Long form: one row per (phi, identity) pair.
void write_residuals_long_csv(const std::filesystem::path& path,
                              const std::vector<ResidualReportRow>& rows);

void write_sweep_csv(const std::filesystem::path& path, const ConvergenceReport& report);
void write_sweep_summary(const std::filesystem::path& path, const ConvergenceReport& report,
                         const SweepPlan& plan);

// --- run manifest ----------------------------------------------------------

/// Completion marker of a command run. Written last, via a temp file and
/// rename, so an interrupted run leaves no manifest. Wall time is the only
/// nondeterministic field and lives here, never in CSV bodies.
struct RunManifest {
    std::string subcommand;
    std::string config_hash;
    std::map<std::string, double> tolerances;
    double wall_time_s = 0.0;
    std::map<std::string, std::string> invariants; // pass / fail / skipped
    std::vector<std::string> outputs;              // files this run produced
    std::map<std::string, std::string> notes;
};

/// Writes `<subcommand>.manifest.json` into dir; verifies the listed outputs
/// exist first.
void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

} // namespace ftl

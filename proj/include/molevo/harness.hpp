#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "molevo/engine.hpp"

namespace molevo::harness {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field_path, const std::string& message)
      : std::runtime_error(field_path + ": " + message) {}
};

// Strict parse of the JSON run-config schema; unknown keys and type
// mismatches raise ConfigError naming the field path. Missing fields keep
// the RunConfig defaults.
RunConfig run_config_from_json_text(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

// Digest of the effective configuration; stamped into every output file so
// any reported number traces back to one deterministic run.
std::uint64_t config_digest(const RunConfig& cfg);
std::string digest_hex(std::uint64_t digest);

struct WindowPoint {
  int step = 0;  // first step of the window
  double realism = 0.0;
  double novelty = 0.0;
};

// Ratio-of-sums over each window of consecutive steps.
std::vector<WindowPoint> sliding_window(const std::vector<StepRecord>& steps, int window);

inline constexpr int kDefaultWindow = 10;

// Writes steps.csv, summary.csv, window.csv, population.smi and policy.tsv.
void write_run_outputs(const std::filesystem::path& dir, const RunConfig& cfg,
                       const RunResult& result, int window = kDefaultWindow);

std::vector<StepRecord> read_steps_csv(const std::filesystem::path& path);

// Registry build with corpus quality gate: throws when more than half of
// the non-comment lines fail to parse.
ReferenceRegistry build_ref(const std::filesystem::path& corpus_path, int max_diameter,
                            std::ostream& log);

struct ScheduleGrid {
  EpsilonSchedule::Kind kind = EpsilonSchedule::Kind::constant;
  std::vector<double> alphas;   // power_law
  std::vector<double> lambdas;  // greedy
};

struct ExperimentSpec {
  int runs = 10;
  std::vector<std::uint64_t> seeds;  // explicit, or expanded from base_seed
  bool baseline_included = true;
  std::vector<int> context_diameters = {0, 2};
  std::vector<double> eps_floors = {0.1, 0.2, 0.3};
  std::vector<ScheduleGrid> schedules;
  RunConfig base;

  void validate() const;
};

ExperimentSpec experiment_spec_from_json_text(const std::string& text);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

struct ConfigSummary {
  std::string label;
  std::string method;    // "baseline" | "policy"
  std::string schedule;  // "-" for baseline
  std::optional<double> eps_floor;
  std::optional<int> context_diameter;
  int runs = 0;
  double realism_mean = 0.0;
  double realism_std = 0.0;
  double novelty_mean = 0.0;
  double novelty_std = 0.0;
  std::vector<double> run_realism;
  std::vector<double> run_novelty;
  std::string error;  // non-empty when any run of this config failed
};

// Expands the grid (baseline first, then diameters x floors x schedules)
// into one RunConfig per (config, seed).
std::vector<std::pair<std::string, RunConfig>> expand_grid(const ExperimentSpec& spec);

// Runs every grid point for every seed; run directories land under
// out_dir/<label>/run_<seed>/. A failed run voids its config row and is
// reported in the row's error column; other configs proceed.
std::vector<ConfigSummary> run_sweep(const ExperimentSpec& spec, const ReferenceRegistry& reg,
                                     const std::filesystem::path& out_dir, int jobs);

void write_sweep_summary(const std::vector<ConfigSummary>& rows,
                         const std::filesystem::path& path);

// Cross-run sliding-window aggregation (mean and sample std per window)
// from the runs' steps.csv files. Throws on mismatched step counts.
void write_report(const std::vector<std::filesystem::path>& run_dirs, int window,
                  std::ostream& out);

std::string format6(double value);

}  // namespace molevo::harness

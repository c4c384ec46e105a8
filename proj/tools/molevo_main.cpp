// Command-line front end: build-ref, run, sweep, report.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "molevo/harness.hpp"

namespace fs = std::filesystem;
using namespace molevo;

namespace {

std::string registry_path_or_default(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("MOLEVO_REGISTRY"); env && *env) return env;
  throw std::runtime_error("no registry given: pass --registry or set MOLEVO_REGISTRY");
}

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::optional<std::string> mode;
  std::optional<int> context_diameter;
  std::optional<std::string> schedule_kind;
  std::optional<double> eps_floor;
  std::optional<double> eps0;
  std::optional<double> alpha;
  std::optional<double> lambda;
  std::optional<double> p_min;
  std::optional<std::string> init_smiles;
  std::optional<int> max_heavy;
  std::optional<int> parents;
  std::optional<int> attempts;

  void apply(RunConfig& cfg) const {
    if (seed) cfg.seed = *seed;
    if (steps) cfg.steps = *steps;
    if (mode) {
      if (*mode == "uniform") {
        cfg.selection_mode = RunConfig::SelectionMode::uniform;
      } else if (*mode == "policy") {
        cfg.selection_mode = RunConfig::SelectionMode::policy;
      } else {
        throw harness::ConfigError("--mode", "must be uniform or policy");
      }
    }
    if (context_diameter) cfg.context_diameter = *context_diameter;
    if (schedule_kind) {
      if (*schedule_kind == "constant") {
        cfg.schedule.kind = EpsilonSchedule::Kind::constant;
      } else if (*schedule_kind == "greedy") {
        cfg.schedule.kind = EpsilonSchedule::Kind::greedy;
      } else if (*schedule_kind == "power_law") {
        cfg.schedule.kind = EpsilonSchedule::Kind::power_law;
      } else {
        throw harness::ConfigError("--schedule", "must be constant, greedy or power_law");
      }
    }
    if (eps_floor) cfg.schedule.eps_floor = *eps_floor;
    if (eps0) cfg.schedule.eps0 = *eps0;
    if (alpha) cfg.schedule.alpha = *alpha;
    if (lambda) cfg.schedule.lambda = *lambda;
    if (p_min) cfg.p_min = *p_min;
    if (init_smiles) cfg.init_smiles = *init_smiles;
    if (max_heavy) cfg.max_heavy = *max_heavy;
    if (parents) cfg.parents_per_step = *parents;
    if (attempts) cfg.attempts_per_parent = *attempts;
    cfg.validate();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-guided evolutionary molecular design"};
  app.require_subcommand(1);

  // build-ref
  auto* build = app.add_subcommand("build-ref", "Build an environment registry from a corpus");
  std::string build_in, build_out, build_text;
  int build_diameter = 4;
  build->add_option("--in", build_in, "SMILES corpus, one molecule per line")->required();
  build->add_option("--out", build_out, "registry output file")->required();
  build->add_option("--max-diameter", build_diameter, "largest fingerprint diameter (0, 2 or 4)");
  build->add_option("--text-export", build_text, "also write ids as decimal text");

  // run
  auto* run_cmd = app.add_subcommand("run", "Execute one seeded run");
  std::string run_config, run_registry, run_out;
  RunOverrides ov;
  run_cmd->add_option("--config", run_config, "run config JSON file");
  run_cmd->add_option("--registry", run_registry, "registry file (or MOLEVO_REGISTRY)");
  run_cmd->add_option("--out", run_out, "output directory")->required();
  run_cmd->add_option("--seed", ov.seed);
  run_cmd->add_option("--steps", ov.steps);
  run_cmd->add_option("--mode", ov.mode, "uniform|policy");
  run_cmd->add_option("--context-diameter", ov.context_diameter);
  run_cmd->add_option("--schedule", ov.schedule_kind, "constant|greedy|power_law");
  run_cmd->add_option("--eps-floor", ov.eps_floor);
  run_cmd->add_option("--eps0", ov.eps0);
  run_cmd->add_option("--alpha", ov.alpha);
  run_cmd->add_option("--lambda", ov.lambda);
  run_cmd->add_option("--p-min", ov.p_min);
  run_cmd->add_option("--init", ov.init_smiles, "starting molecule SMILES");
  run_cmd->add_option("--max-heavy", ov.max_heavy);
  run_cmd->add_option("--parents", ov.parents);
  run_cmd->add_option("--attempts", ov.attempts);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a configuration grid");
  std::string sweep_spec, sweep_registry, sweep_out;
  int sweep_jobs = static_cast<int>(std::thread::hardware_concurrency());
  sweep_cmd->add_option("--spec", sweep_spec, "experiment spec JSON file")->required();
  sweep_cmd->add_option("--registry", sweep_registry, "registry file (or MOLEVO_REGISTRY)");
  sweep_cmd->add_option("--out", sweep_out, "output directory")->required();
  sweep_cmd->add_option("--jobs", sweep_jobs, "parallel runs");

  // report
  auto* report_cmd = app.add_subcommand("report", "Cross-run sliding-window series");
  std::vector<std::string> report_dirs;
  std::string report_out;
  int report_window = harness::kDefaultWindow;
  report_cmd->add_option("dirs", report_dirs, "run directories")->required();
  report_cmd->add_option("--window", report_window, "window size in steps");
  report_cmd->add_option("--out", report_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (*build) {
      const ReferenceRegistry reg = harness::build_ref(build_in, build_diameter, std::cout);
      save_registry(reg, build_out);
      std::cout << "registry written: " << build_out << "\n";
      if (!build_text.empty()) {
        std::ofstream text(build_text);
        if (!text) throw std::runtime_error("cannot open text export: " + build_text);
        export_registry_text(reg, text);
      }
    } else if (*run_cmd) {
      RunConfig cfg = run_config.empty() ? RunConfig{} : harness::load_run_config(run_config);
      ov.apply(cfg);
      const ReferenceRegistry reg = load_registry(registry_path_or_default(run_registry));
      const RunResult result = run(cfg, reg);
      harness::write_run_outputs(run_out, cfg, result);
      std::cout << "realism " << harness::format6(result.realism) << "  novelty "
                << harness::format6(result.novelty) << "  population "
                << result.population.size() << "\n";
      std::cout << "outputs in " << run_out << "\n";
    } else if (*sweep_cmd) {
      const harness::ExperimentSpec spec = harness::load_experiment_spec(sweep_spec);
      const ReferenceRegistry reg = load_registry(registry_path_or_default(sweep_registry));
      const auto rows = harness::run_sweep(spec, reg, sweep_out, std::max(1, sweep_jobs));
      const fs::path summary = fs::path(sweep_out) / "sweep_summary.csv";
      harness::write_sweep_summary(rows, summary);
      for (const auto& row : rows) {
        std::cout << row.label << ": ";
        if (!row.error.empty()) {
          std::cout << "FAILED (" << row.error << ")\n";
          continue;
        }
        std::cout << "realism " << harness::format6(row.realism_mean) << " +/- "
                  << harness::format6(row.realism_std) << ", novelty "
                  << harness::format6(row.novelty_mean) << " +/- "
                  << harness::format6(row.novelty_std) << " (" << row.runs << " runs)\n";
      }
      std::cout << "summary written: " << summary.string() << "\n";
    } else if (*report_cmd) {
      std::vector<fs::path> dirs(report_dirs.begin(), report_dirs.end());
      if (report_out.empty()) {
        harness::write_report(dirs, report_window, std::cout);
      } else {
        std::ofstream out(report_out);
        if (!out) throw std::runtime_error("cannot open report output: " + report_out);
        harness::write_report(dirs, report_window, out);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#include "molevo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace molevo::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

namespace {

std::string compact_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", value);
  return buf;
}

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
    }
  }
}

template <typename T>
T fetch(const json& obj, const std::string& path, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path.empty() ? key : path + "." + key, "wrong type");
  }
}

EpsilonSchedule schedule_from_json(const json& obj, const std::string& path,
                                   EpsilonSchedule base) {
  require_keys(obj, path, {"kind", "eps_floor", "eps0", "alpha", "lambda"});
  if (obj.contains("kind")) {
    const std::string kind = fetch<std::string>(obj, path, "kind", "");
    if (kind == "constant") {
      base.kind = EpsilonSchedule::Kind::constant;
    } else if (kind == "greedy") {
      base.kind = EpsilonSchedule::Kind::greedy;
    } else if (kind == "power_law") {
      base.kind = EpsilonSchedule::Kind::power_law;
    } else {
      throw ConfigError(path + ".kind", "must be constant, greedy or power_law");
    }
  }
  base.eps_floor = fetch<double>(obj, path, "eps_floor", base.eps_floor);
  base.eps0 = fetch<double>(obj, path, "eps0", base.eps0);
  base.alpha = fetch<double>(obj, path, "alpha", base.alpha);
  base.lambda = fetch<double>(obj, path, "lambda", base.lambda);
  return base;
}

std::string schedule_kind_name(EpsilonSchedule::Kind kind) {
  switch (kind) {
    case EpsilonSchedule::Kind::constant: return "constant";
    case EpsilonSchedule::Kind::greedy: return "greedy";
    case EpsilonSchedule::Kind::power_law: return "power_law";
  }
  return "?";
}

RunConfig run_config_from_json(const json& root, const std::string& path, RunConfig cfg) {
  require_keys(root, path,
               {"seed", "steps", "selection_mode", "context_diameter", "schedule", "p_min",
                "invert_exploration", "actions", "allow_bond_deletion", "candidates",
                "max_heavy", "parents_per_step", "attempts_per_parent", "init_smiles",
                "filter_diameters", "strict_improvement"});
  auto sub = [&](const char* key) { return path.empty() ? std::string(key) : path + "." + key; };

  cfg.seed = fetch<std::uint64_t>(root, path, "seed", cfg.seed);
  cfg.steps = fetch<int>(root, path, "steps", cfg.steps);
  if (root.contains("selection_mode")) {
    const std::string mode = fetch<std::string>(root, path, "selection_mode", "");
    if (mode == "uniform") {
      cfg.selection_mode = RunConfig::SelectionMode::uniform;
    } else if (mode == "policy") {
      cfg.selection_mode = RunConfig::SelectionMode::policy;
    } else {
      throw ConfigError(sub("selection_mode"), "must be uniform or policy");
    }
  }
  cfg.context_diameter = fetch<int>(root, path, "context_diameter", cfg.context_diameter);
  if (root.contains("schedule")) {
    if (!root.at("schedule").is_object()) throw ConfigError(sub("schedule"), "must be an object");
    cfg.schedule = schedule_from_json(root.at("schedule"), sub("schedule"), cfg.schedule);
  }
  cfg.p_min = fetch<double>(root, path, "p_min", cfg.p_min);
  cfg.invert_exploration =
      fetch<bool>(root, path, "invert_exploration", cfg.invert_exploration);
  if (root.contains("actions")) {
    if (!root.at("actions").is_array()) throw ConfigError(sub("actions"), "must be an array");
    cfg.actions.add_atom = cfg.actions.remove_atom = cfg.actions.change_bond = false;
    for (const auto& entry : root.at("actions")) {
      const auto name = entry.is_string() ? entry.get<std::string>() : std::string();
      const auto kind = mutation_kind_from_name(name);
      if (!kind) throw ConfigError(sub("actions"), "entries must be AddA, RmA or ChB");
      if (*kind == MutationKind::AddA) cfg.actions.add_atom = true;
      if (*kind == MutationKind::RmA) cfg.actions.remove_atom = true;
      if (*kind == MutationKind::ChB) cfg.actions.change_bond = true;
    }
  }
  cfg.actions.allow_bond_deletion =
      fetch<bool>(root, path, "allow_bond_deletion", cfg.actions.allow_bond_deletion);
  if (root.contains("candidates")) {
    if (!root.at("candidates").is_array()) {
      throw ConfigError(sub("candidates"), "must be an array");
    }
    cfg.candidates.clear();
    for (const auto& entry : root.at("candidates")) {
      const auto name = entry.is_string() ? entry.get<std::string>() : std::string();
      const auto e = element_from_symbol(name);
      if (!e) throw ConfigError(sub("candidates"), "unknown element symbol '" + name + "'");
      cfg.candidates.push_back(*e);
    }
  }
  cfg.max_heavy = fetch<int>(root, path, "max_heavy", cfg.max_heavy);
  cfg.parents_per_step = fetch<int>(root, path, "parents_per_step", cfg.parents_per_step);
  cfg.attempts_per_parent =
      fetch<int>(root, path, "attempts_per_parent", cfg.attempts_per_parent);
  cfg.init_smiles = fetch<std::string>(root, path, "init_smiles", cfg.init_smiles);
  if (root.contains("filter_diameters")) {
    if (!root.at("filter_diameters").is_array()) {
      throw ConfigError(sub("filter_diameters"), "must be an array");
    }
    cfg.filter_diameters.clear();
    for (const auto& entry : root.at("filter_diameters")) {
      if (!entry.is_number_integer()) {
        throw ConfigError(sub("filter_diameters"), "entries must be integers");
      }
      cfg.filter_diameters.push_back(entry.get<int>());
    }
  }
  cfg.strict_improvement = fetch<bool>(root, path, "strict_improvement", cfg.strict_improvement);

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const auto colon = what.find(':');
    throw ConfigError(path.empty() ? what.substr(0, colon) : path + "." + what.substr(0, colon),
                      what.substr(colon + 2));
  }
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["steps"] = cfg.steps;
  j["selection_mode"] =
      cfg.selection_mode == RunConfig::SelectionMode::uniform ? "uniform" : "policy";
  j["context_diameter"] = cfg.context_diameter;
  json sch;
  sch["kind"] = schedule_kind_name(cfg.schedule.kind);
  sch["eps_floor"] = cfg.schedule.eps_floor;
  sch["eps0"] = cfg.schedule.eps0;
  sch["alpha"] = cfg.schedule.alpha;
  sch["lambda"] = cfg.schedule.lambda;
  j["schedule"] = sch;
  j["p_min"] = cfg.p_min;
  j["invert_exploration"] = cfg.invert_exploration;
  json actions = json::array();
  if (cfg.actions.add_atom) actions.push_back("AddA");
  if (cfg.actions.remove_atom) actions.push_back("RmA");
  if (cfg.actions.change_bond) actions.push_back("ChB");
  j["actions"] = actions;
  j["allow_bond_deletion"] = cfg.actions.allow_bond_deletion;
  json candidates = json::array();
  for (Element e : cfg.candidates) candidates.push_back(std::string(element_symbol(e)));
  j["candidates"] = candidates;
  j["max_heavy"] = cfg.max_heavy;
  j["parents_per_step"] = cfg.parents_per_step;
  j["attempts_per_parent"] = cfg.attempts_per_parent;
  j["init_smiles"] = cfg.init_smiles;
  j["filter_diameters"] = cfg.filter_diameters;
  j["strict_improvement"] = cfg.strict_improvement;
  return j;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace

RunConfig run_config_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<config>", e.what());
  }
  if (!root.is_object()) throw ConfigError("<config>", "top level must be an object");
  return run_config_from_json(root, "", RunConfig{});
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return run_config_from_json_text(buf.str());
}

std::uint64_t config_digest(const RunConfig& cfg) {
  const std::string dump = config_to_json(cfg).dump();
  return hash64_bytes(dump.data(), dump.size());
}

std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

std::vector<WindowPoint> sliding_window(const std::vector<StepRecord>& steps, int window) {
  if (window < 1 || steps.size() < static_cast<std::size_t>(window)) return {};
  std::vector<WindowPoint> out;
  out.reserve(steps.size() - static_cast<std::size_t>(window) + 1);
  long long generated = 0;
  long long passed = 0;
  long long novel = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    generated += steps[i].generated;
    passed += steps[i].passed_sw;
    novel += steps[i].novel;
    if (i + 1 >= static_cast<std::size_t>(window)) {
      if (i + 1 > static_cast<std::size_t>(window)) {
        const StepRecord& gone = steps[i + 1 - static_cast<std::size_t>(window) - 1];
        generated -= gone.generated;
        passed -= gone.passed_sw;
        novel -= gone.novel;
      }
      WindowPoint p;
      p.step = steps[i + 1 - static_cast<std::size_t>(window)].step;
      p.realism = generated > 0 ? static_cast<double>(passed) / static_cast<double>(generated) : 0.0;
      p.novelty = generated > 0 ? static_cast<double>(novel) / static_cast<double>(generated) : 0.0;
      out.push_back(p);
    }
  }
  return out;
}

void write_run_outputs(const fs::path& dir, const RunConfig& cfg, const RunResult& result,
                       int window) {
  fs::create_directories(dir);
  const std::string stamp =
      "digest=" + digest_hex(config_digest(cfg)) + " seed=" + std::to_string(cfg.seed);

  {
    auto out = open_out(dir / "config.json");
    out << config_to_json(cfg).dump(2) << "\n";
  }
  {
    auto out = open_out(dir / "steps.csv");
    out << "# molevo steps v1 " << stamp << "\n";
    out << "step,generated,passed_sw,novel,inserted\n";
    for (const StepRecord& r : result.steps) {
      out << r.step << ',' << r.generated << ',' << r.passed_sw << ',' << r.novel << ','
          << r.inserted << "\n";
    }
  }
  {
    long long generated = 0, passed = 0, novel = 0, inserted = 0;
    for (const StepRecord& r : result.steps) {
      generated += r.generated;
      passed += r.passed_sw;
      novel += r.novel;
      inserted += r.inserted;
    }
    auto out = open_out(dir / "summary.csv");
    out << "# molevo summary v1 " << stamp << "\n";
    out << "steps,generated,passed_sw,novel,inserted,realism,novelty\n";
    out << result.steps.size() << ',' << generated << ',' << passed << ',' << novel << ','
        << inserted << ',' << format6(result.realism) << ',' << format6(result.novelty) << "\n";
  }
  {
    auto out = open_out(dir / "window.csv");
    out << "# molevo window v1 " << stamp << " window=" << window << "\n";
    out << "step,realism_window,novelty_window\n";
    for (const WindowPoint& p : sliding_window(result.steps, window)) {
      out << p.step << ',' << format6(p.realism) << ',' << format6(p.novelty) << "\n";
    }
  }
  {
    auto out = open_out(dir / "population.smi");
    out << "# molevo population v1 " << stamp << "\n";
    for (const Individual& ind : result.population) {
      out << ind.key << '\t' << format6(ind.of_score) << "\n";
    }
  }
  {
    auto out = open_out(dir / "policy.tsv");
    out << "# molevo policy v1 " << stamp << "\n";
    out << "action\tenv_id\toption\tn_uses\tn_success\trate\n";
    std::vector<std::pair<ContextKey, ContextStats>> rows(result.table.stats.begin(),
                                                          result.table.stats.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return std::tie(a.first.action, a.first.env_id, a.first.option) <
             std::tie(b.first.action, b.first.env_id, b.first.option);
    });
    for (const auto& [key, stats] : rows) {
      out << mutation_kind_name(key.action) << '\t' << key.env_id << '\t' << key.option << '\t'
          << stats.n_uses << '\t' << stats.n_success << '\t' << format6(success_rate(stats))
          << "\n";
    }
  }
}

std::vector<StepRecord> read_steps_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open steps file: " + path.string());
  std::vector<StepRecord> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "step,generated,passed_sw,novel,inserted") {
        throw std::runtime_error("unexpected steps.csv header in " + path.string());
      }
      header_seen = true;
      continue;
    }
    StepRecord r;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%d,%d", &r.step, &r.generated, &r.passed_sw,
                    &r.novel, &r.inserted) != 5) {
      throw std::runtime_error("malformed row in " + path.string() + ": " + line);
    }
    out.push_back(r);
  }
  if (!header_seen) throw std::runtime_error("no header row in " + path.string());
  return out;
}

ReferenceRegistry build_ref(const fs::path& corpus_path, int max_diameter, std::ostream& log) {
  std::ifstream in(corpus_path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + corpus_path.string());
  ReferenceRegistry reg = build_registry(in, max_diameter);
  const std::uint64_t total = reg.molecule_count + reg.skipped_count;
  if (reg.skipped_count * 2 > total) {
    throw std::runtime_error("corpus rejected: " + std::to_string(reg.skipped_count) + " of " +
                             std::to_string(total) + " lines failed to parse");
  }
  log << "molecules parsed: " << reg.molecule_count << "\n";
  if (reg.skipped_count > 0) log << "lines skipped:    " << reg.skipped_count << "\n";
  for (std::size_t r = 0; r < reg.sets.size(); ++r) {
    log << "radius " << r << " ids:     " << reg.sets[r].size() << "\n";
  }
  return reg;
}

void ExperimentSpec::validate() const {
  if (runs < 1) throw ConfigError("runs", "must be >= 1");
  if (seeds.size() != static_cast<std::size_t>(runs)) {
    throw ConfigError("seeds", "seed list length must equal runs");
  }
  for (int d : context_diameters) {
    if (d != 0 && d != 2) throw ConfigError("grid.context_diameter", "entries must be 0 or 2");
  }
  for (double e : eps_floors) {
    if (e <= 0.0 || e > 1.0) throw ConfigError("grid.eps_floor", "entries must be in (0,1]");
  }
  if (context_diameters.empty() || eps_floors.empty() || schedules.empty()) {
    if (!baseline_included) {
      throw ConfigError("grid", "empty grid with baseline_included=false selects nothing");
    }
  }
}

ExperimentSpec experiment_spec_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<spec>", e.what());
  }
  if (!root.is_object()) throw ConfigError("<spec>", "top level must be an object");
  require_keys(root, "", {"runs", "seeds", "base_seed", "baseline_included", "grid", "base"});

  ExperimentSpec spec;
  spec.runs = fetch<int>(root, "", "runs", spec.runs);
  spec.baseline_included = fetch<bool>(root, "", "baseline_included", spec.baseline_included);
  if (root.contains("seeds")) {
    if (!root.at("seeds").is_array()) throw ConfigError("seeds", "must be an array");
    for (const auto& s : root.at("seeds")) {
      if (!s.is_number_unsigned() && !s.is_number_integer()) {
        throw ConfigError("seeds", "entries must be integers");
      }
      spec.seeds.push_back(s.get<std::uint64_t>());
    }
  } else {
    const auto base_seed = fetch<std::uint64_t>(root, "", "base_seed", 1);
    for (int i = 0; i < spec.runs; ++i) spec.seeds.push_back(base_seed + static_cast<unsigned>(i));
  }
  if (root.contains("base")) {
    if (!root.at("base").is_object()) throw ConfigError("base", "must be an object");
    spec.base = run_config_from_json(root.at("base"), "base", RunConfig{});
  }
  if (root.contains("grid")) {
    const json& grid = root.at("grid");
    if (!grid.is_object()) throw ConfigError("grid", "must be an object");
    require_keys(grid, "grid", {"context_diameter", "eps_floor", "schedules"});
    if (grid.contains("context_diameter")) {
      spec.context_diameters = grid.at("context_diameter").get<std::vector<int>>();
    }
    if (grid.contains("eps_floor")) {
      spec.eps_floors = grid.at("eps_floor").get<std::vector<double>>();
    }
    if (grid.contains("schedules")) {
      spec.schedules.clear();
      for (const auto& entry : grid.at("schedules")) {
        if (!entry.is_object()) throw ConfigError("grid.schedules", "entries must be objects");
        require_keys(entry, "grid.schedules", {"kind", "alpha", "lambda"});
        ScheduleGrid sg;
        const std::string kind = fetch<std::string>(entry, "grid.schedules", "kind", "constant");
        if (kind == "constant") {
          sg.kind = EpsilonSchedule::Kind::constant;
        } else if (kind == "greedy") {
          sg.kind = EpsilonSchedule::Kind::greedy;
          sg.lambdas = entry.contains("lambda") ? entry.at("lambda").get<std::vector<double>>()
                                                : std::vector<double>{0.01};
        } else if (kind == "power_law") {
          sg.kind = EpsilonSchedule::Kind::power_law;
          sg.alphas = entry.contains("alpha") ? entry.at("alpha").get<std::vector<double>>()
                                              : std::vector<double>{0.35};
        } else {
          throw ConfigError("grid.schedules.kind", "must be constant, greedy or power_law");
        }
        spec.schedules.push_back(std::move(sg));
      }
    }
  }
  if (spec.schedules.empty()) {
    ScheduleGrid sg;
    sg.kind = EpsilonSchedule::Kind::power_law;
    sg.alphas = {0.35};
    spec.schedules.push_back(sg);
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open experiment spec: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return experiment_spec_from_json_text(buf.str());
}

std::vector<std::pair<std::string, RunConfig>> expand_grid(const ExperimentSpec& spec) {
  std::vector<std::pair<std::string, RunConfig>> out;
  if (spec.baseline_included) {
    RunConfig cfg = spec.base;
    cfg.selection_mode = RunConfig::SelectionMode::uniform;
    out.emplace_back("baseline", cfg);
  }
  for (int d : spec.context_diameters) {
    for (double eps : spec.eps_floors) {
      for (const ScheduleGrid& sg : spec.schedules) {
        std::vector<EpsilonSchedule> instances;
        if (sg.kind == EpsilonSchedule::Kind::constant) {
          instances.push_back({EpsilonSchedule::Kind::constant, eps, eps, 0.0, 0.0});
        } else if (sg.kind == EpsilonSchedule::Kind::greedy) {
          for (double l : sg.lambdas) {
            instances.push_back({EpsilonSchedule::Kind::greedy, eps, 1.0, l, 0.0});
          }
        } else {
          for (double a : sg.alphas) {
            instances.push_back({EpsilonSchedule::Kind::power_law, eps, 1.0, 0.0, a});
          }
        }
        for (const EpsilonSchedule& sch : instances) {
          RunConfig cfg = spec.base;
          cfg.selection_mode = RunConfig::SelectionMode::policy;
          cfg.context_diameter = d;
          cfg.schedule = sch;
          std::string label = "policy_d" + std::to_string(d);
          switch (sch.kind) {
            case EpsilonSchedule::Kind::constant:
              label += "_constant";
              break;
            case EpsilonSchedule::Kind::greedy:
              label += "_greedy_l" + compact_number(sch.lambda);
              break;
            case EpsilonSchedule::Kind::power_law:
              label += "_power_law_a" + compact_number(sch.alpha);
              break;
          }
          label += "_e" + compact_number(eps);
          out.emplace_back(label, cfg);
        }
      }
    }
  }
  return out;
}

std::vector<ConfigSummary> run_sweep(const ExperimentSpec& spec, const ReferenceRegistry& reg,
                                     const fs::path& out_dir, int jobs) {
  const auto configs = expand_grid(spec);

  struct Task {
    std::size_t config_index;
    RunConfig cfg;
    fs::path dir;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (std::uint64_t seed : spec.seeds) {
      RunConfig cfg = configs[c].second;
      cfg.seed = seed;
      tasks.push_back({c, cfg, out_dir / configs[c].first / ("run_" + std::to_string(seed))});
    }
  }

  struct TaskResult {
    double realism = 0.0;
    double novelty = 0.0;
    std::string error;
  };
  std::vector<TaskResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, jobs);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          const RunResult r = run(tasks[i].cfg, reg);
          write_run_outputs(tasks[i].dir, tasks[i].cfg, r);
          results[i] = {r.realism, r.novelty, ""};
        } catch (const std::exception& e) {
          results[i] = {0.0, 0.0, e.what()};
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  std::vector<ConfigSummary> rows(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    ConfigSummary& row = rows[c];
    row.label = configs[c].first;
    const RunConfig& cfg = configs[c].second;
    if (cfg.selection_mode == RunConfig::SelectionMode::uniform) {
      row.method = "baseline";
      row.schedule = "-";
    } else {
      row.method = "policy";
      row.eps_floor = cfg.schedule.eps_floor;
      row.context_diameter = cfg.context_diameter;
      switch (cfg.schedule.kind) {
        case EpsilonSchedule::Kind::constant:
          row.schedule = "constant";
          break;
        case EpsilonSchedule::Kind::greedy:
          row.schedule = "greedy(lambda=" + compact_number(cfg.schedule.lambda) + ")";
          break;
        case EpsilonSchedule::Kind::power_law:
          row.schedule = "power_law(alpha=" + compact_number(cfg.schedule.alpha) + ")";
          break;
      }
    }
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    ConfigSummary& row = rows[tasks[i].config_index];
    if (!results[i].error.empty()) {
      row.error = "seed " + std::to_string(tasks[i].cfg.seed) + ": " + results[i].error;
      continue;
    }
    row.run_realism.push_back(results[i].realism);
    row.run_novelty.push_back(results[i].novelty);
  }
  for (ConfigSummary& row : rows) {
    if (!row.error.empty()) {
      row.runs = 0;
      row.run_realism.clear();
      row.run_novelty.clear();
      continue;
    }
    row.runs = static_cast<int>(row.run_realism.size());
    row.realism_mean = mean_of(row.run_realism);
    row.realism_std = sample_std(row.run_realism);
    row.novelty_mean = mean_of(row.run_novelty);
    row.novelty_std = sample_std(row.run_novelty);
  }
  return rows;
}

void write_sweep_summary(const std::vector<ConfigSummary>& rows, const fs::path& path) {
  auto out = open_out(path);
  out << "# molevo sweep v1\n";
  out << "method,schedule,eps_floor,context_diameter,runs,realism_mean,realism_std,"
         "novelty_mean,novelty_std,error\n";
  for (const ConfigSummary& row : rows) {
    out << row.method << ',' << row.schedule << ','
        << (row.eps_floor ? format6(*row.eps_floor) : "-") << ','
        << (row.context_diameter ? std::to_string(*row.context_diameter) : "-") << ','
        << row.runs << ',' << format6(row.realism_mean) << ',' << format6(row.realism_std) << ','
        << format6(row.novelty_mean) << ',' << format6(row.novelty_std) << ',' << row.error
        << "\n";
  }
}

void write_report(const std::vector<fs::path>& run_dirs, int window, std::ostream& out) {
  if (run_dirs.empty()) throw std::runtime_error("report: no run directories given");
  std::vector<std::vector<WindowPoint>> series;
  for (const fs::path& dir : run_dirs) {
    const fs::path steps_path = fs::is_directory(dir) ? dir / "steps.csv" : dir;
    const auto steps = read_steps_csv(steps_path);
    series.push_back(sliding_window(steps, window));
    if (series.back().empty()) {
      throw std::runtime_error("report: run shorter than the window: " + steps_path.string());
    }
    if (series.back().size() != series.front().size()) {
      throw std::runtime_error("report: mismatched step counts across runs");
    }
  }
  out << "# molevo report v1 window=" << window << " runs=" << run_dirs.size() << "\n";
  out << "step,realism_mean,realism_std\n";
  for (std::size_t i = 0; i < series.front().size(); ++i) {
    std::vector<double> values;
    values.reserve(series.size());
    for (const auto& s : series) values.push_back(s[i].realism);
    out << series.front()[i].step << ',' << format6(mean_of(values)) << ','
        << format6(sample_std(values)) << "\n";
  }
}

}  // namespace molevo::harness

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "molevo/graph.hpp"
#include "molevo/policy.hpp"
#include "molevo/realism.hpp"
#include "molevo/rng.hpp"
#include "molevo/smiles.hpp"

namespace molevo {

struct Individual {
  MolecularGraph graph;
  CanonicalKey key;
  double of_score = 0.0;
};

struct RunConfig {
  std::uint64_t seed = 0;
  int steps = 500;

  enum class SelectionMode { uniform, policy };
  SelectionMode selection_mode = SelectionMode::policy;

  int context_diameter = 2;  // 0 or 2
  EpsilonSchedule schedule{EpsilonSchedule::Kind::power_law, 0.1, 1.0, 0.0, 0.35};
  double p_min = 0.05;
  // Ablation switch: explore when the uniform draw is >= epsilon instead
  // of < epsilon.
  bool invert_exploration = false;

  ActionMask actions;
  std::vector<Element> candidates = {Element::C, Element::N, Element::O, Element::F};
  int max_heavy = 38;
  int parents_per_step = 10;
  int attempts_per_parent = 50;
  std::string init_smiles = "CC(=O)Oc1ccccc1C(=O)O";
  std::vector<int> filter_diameters = {0, 2, 4};
  // Accept a mutant scoring equal to its parent (default) or require a
  // strict improvement.
  bool strict_improvement = false;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct StepRecord {
  int step = 0;
  int generated = 0;
  int passed_sw = 0;
  int novel = 0;
  int inserted = 0;
};

struct RunResult {
  std::vector<StepRecord> steps;
  double realism = 0.0;  // sum(passed_sw) / sum(generated)
  double novelty = 0.0;  // sum(novel) / sum(generated)
  std::vector<Individual> population;
  PolicyTable table;
};

// 1 - silly proportion; 1.0 means every environment is known.
double objective(const MolecularGraph& g, const ReferenceRegistry& reg,
                 std::span<const int> diameters);

// One evolutionary run: owns its population, archive, policy table and
// random source. The registry is shared read-only.
class Engine {
 public:
  Engine(RunConfig cfg, const ReferenceRegistry& reg);

  // (passes filter, objective value). Replaceable for tests; replacements
  // must be pure or memoization has to be switched off.
  std::function<std::pair<bool, double>(const MolecularGraph&)> evaluate;
  bool check_novelty = true;
  bool memoize_evaluations = true;

  // Enumerates the parent's valid mutations and samples one: uniform in
  // baseline mode, probability-matching in policy mode. Returns the mutant
  // and the selection outcome, or nothing when no mutation is valid.
  std::optional<std::pair<MolecularGraph, SelectionOutcome>> search_neighbour(
      const Individual& parent);

  StepRecord step();
  RunResult run();

  const std::vector<Individual>& population() const { return population_; }
  const PolicyTable& table() const { return table_; }
  PolicyTable& table_mutable() { return table_; }
  const RunConfig& config() const { return cfg_; }

 private:
  struct MutantEval {
    bool passed = false;
    double of = 0.0;
    CanonicalKey key;
  };
  struct ParentCache {
    std::vector<Mutation> valid;
    std::vector<ContextKey> keys;  // policy mode only
    std::vector<std::optional<MutantEval>> evals;
  };

  ParentCache& cache_for(int member_index);
  std::size_t sample_index(const ParentCache& cache, SelectionOutcome& outcome);
  const MutantEval& evaluate_mutant(int member_index, ParentCache& cache, std::size_t pick);

  RunConfig cfg_;
  const ReferenceRegistry& reg_;
  Rng rng_;
  std::vector<Individual> population_;
  std::unordered_set<CanonicalKey> archive_;
  PolicyTable table_;
  std::unordered_map<int, ParentCache> parent_caches_;
  int step_index_ = 0;  // schedule time t, constant within a step
};

// Convenience wrapper: build an engine and run it to completion.
RunResult run(const RunConfig& cfg, const ReferenceRegistry& reg);

}  // namespace molevo

#include "molevo/engine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace molevo {

void RunConfig::validate() const {
  if (steps <= 0) throw std::invalid_argument("steps: must be > 0");
  if (parents_per_step < 1) throw std::invalid_argument("parents_per_step: must be >= 1");
  if (attempts_per_parent < 1) throw std::invalid_argument("attempts_per_parent: must be >= 1");
  if (context_diameter != 0 && context_diameter != 2) {
    throw std::invalid_argument("context_diameter: must be 0 or 2");
  }
  if (p_min <= 0.0 || p_min >= 1.0) throw std::invalid_argument("p_min: must be in (0,1)");
  if (schedule.eps_floor <= 0.0 || schedule.eps_floor > schedule.eps0 || schedule.eps0 > 1.0) {
    throw std::invalid_argument("schedule: need 0 < eps_floor <= eps0 <= 1");
  }
  if (schedule.kind == EpsilonSchedule::Kind::greedy && schedule.lambda <= 0.0) {
    throw std::invalid_argument("schedule.lambda: must be > 0");
  }
  if (schedule.kind == EpsilonSchedule::Kind::power_law && schedule.alpha <= 0.0) {
    throw std::invalid_argument("schedule.alpha: must be > 0");
  }
  if (max_heavy < 1) throw std::invalid_argument("max_heavy: must be >= 1");
  if (actions.add_atom && candidates.empty()) {
    throw std::invalid_argument("candidates: must be non-empty when AddA is enabled");
  }
  if (filter_diameters.empty()) throw std::invalid_argument("filter_diameters: must be non-empty");
  for (int d : filter_diameters) {
    if (d != 0 && d != 2 && d != 4) {
      throw std::invalid_argument("filter_diameters: entries must be 0, 2 or 4");
    }
  }
  if (init_smiles.empty()) throw std::invalid_argument("init_smiles: must be non-empty");
}

double objective(const MolecularGraph& g, const ReferenceRegistry& reg,
                 std::span<const int> diameters) {
  return 1.0 - silly_score(g, reg, diameters).value;
}

Engine::Engine(RunConfig cfg, const ReferenceRegistry& reg)
    : cfg_(std::move(cfg)), reg_(reg), rng_(cfg_.seed) {
  cfg_.validate();
  for (int d : cfg_.filter_diameters) {
    if (!reg_.covers_diameter(d)) {
      throw std::invalid_argument("registry does not cover filter diameter " + std::to_string(d));
    }
  }
  evaluate = [this](const MolecularGraph& g) {
    const SillyScore s = silly_score(g, reg_, cfg_.filter_diameters);
    return std::make_pair(s.silly_count == 0, 1.0 - s.value);
  };
  table_.p_min = cfg_.p_min;
  table_.context_diameter = cfg_.context_diameter;

  MolecularGraph init = [&] {
    try {
      return parse_smiles(cfg_.init_smiles);
    } catch (const ParseError& e) {
      throw std::runtime_error(std::string("init_smiles: ") + e.what());
    }
  }();
  CanonicalKey key = canonical_key(init);
  const double of = evaluate(init).second;
  archive_.insert(key);
  population_.push_back({std::move(init), std::move(key), of});
}

Engine::ParentCache& Engine::cache_for(int member_index) {
  auto it = parent_caches_.find(member_index);
  if (it != parent_caches_.end()) return it->second;

  const Individual& parent = population_[static_cast<std::size_t>(member_index)];
  ParentCache cache;
  cache.valid = enumerate_valid_mutations(parent.graph, cfg_.actions, cfg_.candidates,
                                          cfg_.max_heavy);
  if (cfg_.selection_mode == RunConfig::SelectionMode::policy && !cache.valid.empty()) {
    const FingerprintSet fp = ecfp(parent.graph, cfg_.context_diameter);
    const std::vector<int> ranks = refinement_ranks(parent.graph);
    cache.keys = context_keys_for(cache.valid, parent.graph, fp, ranks);
  }
  cache.evals.assign(cache.valid.size(), std::nullopt);
  return parent_caches_.emplace(member_index, std::move(cache)).first->second;
}

std::size_t Engine::sample_index(const ParentCache& cache, SelectionOutcome& outcome) {
  if (cfg_.selection_mode == RunConfig::SelectionMode::uniform) {
    const std::size_t pick = rng_.next_index(cache.valid.size());
    outcome.mutation = cache.valid[pick];
    outcome.index = pick;
    outcome.explored = true;
    return pick;
  }
  outcome = select(cache.valid, cache.keys, table_, cfg_.schedule,
                   static_cast<std::uint64_t>(step_index_), rng_, cfg_.invert_exploration);
  return outcome.index;
}

const Engine::MutantEval& Engine::evaluate_mutant(int member_index, ParentCache& cache,
                                                  std::size_t pick) {
  std::optional<MutantEval>& slot = cache.evals[pick];
  if (!slot || !memoize_evaluations) {
    const Individual& parent = population_[static_cast<std::size_t>(member_index)];
    const MolecularGraph mutant =
        apply_mutation(parent.graph, cache.valid[pick], cfg_.candidates);
    const auto [passed, of] = evaluate(mutant);
    slot = MutantEval{passed, of, canonical_key(mutant)};
  }
  return *slot;
}

std::optional<std::pair<MolecularGraph, SelectionOutcome>> Engine::search_neighbour(
    const Individual& parent) {
  ParentCache cache;
  cache.valid =
      enumerate_valid_mutations(parent.graph, cfg_.actions, cfg_.candidates, cfg_.max_heavy);
  if (cache.valid.empty()) return std::nullopt;
  if (cfg_.selection_mode == RunConfig::SelectionMode::policy) {
    const FingerprintSet fp = ecfp(parent.graph, cfg_.context_diameter);
    const std::vector<int> ranks = refinement_ranks(parent.graph);
    cache.keys = context_keys_for(cache.valid, parent.graph, fp, ranks);
  }
  SelectionOutcome outcome;
  (void)sample_index(cache, outcome);
  return std::make_pair(apply_mutation(parent.graph, outcome.mutation, cfg_.candidates),
                        std::move(outcome));
}

StepRecord Engine::step() {
  StepRecord rec;
  rec.step = step_index_ + 1;

  // Best members by score, ties to the oldest.
  std::vector<int> order(population_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return population_[static_cast<std::size_t>(a)].of_score >
           population_[static_cast<std::size_t>(b)].of_score;
  });
  const std::size_t parent_count =
      std::min<std::size_t>(order.size(), static_cast<std::size_t>(cfg_.parents_per_step));

  const bool policy_mode = cfg_.selection_mode == RunConfig::SelectionMode::policy;

  for (std::size_t p = 0; p < parent_count; ++p) {
    const int member_index = order[p];
    ParentCache& cache = cache_for(member_index);
    if (cache.valid.empty()) continue;
    const double parent_of = population_[static_cast<std::size_t>(member_index)].of_score;

    for (int attempt = 0; attempt < cfg_.attempts_per_parent; ++attempt) {
      SelectionOutcome outcome;
      const std::size_t pick = sample_index(cache, outcome);
      const MutantEval& eval = evaluate_mutant(member_index, cache, pick);

      ++rec.generated;
      if (eval.passed) ++rec.passed_sw;
      if (policy_mode) record(table_, outcome.key, eval.passed ? 1 : 0);

      const bool novel = !archive_.contains(eval.key);
      if (novel) ++rec.novel;

      const bool improves =
          cfg_.strict_improvement ? (eval.of > parent_of) : (eval.of >= parent_of);
      if (eval.passed && (novel || !check_novelty) && improves) {
        MolecularGraph mutant = apply_mutation(
            population_[static_cast<std::size_t>(member_index)].graph, cache.valid[pick],
            cfg_.candidates);
        archive_.insert(eval.key);
        population_.push_back({std::move(mutant), eval.key, eval.of});
        ++rec.inserted;
        break;
      }
    }
  }

  ++step_index_;
  return rec;
}

RunResult Engine::run() {
  RunResult result;
  result.steps.reserve(static_cast<std::size_t>(cfg_.steps));
  long long generated = 0;
  long long passed = 0;
  long long novel = 0;
  for (int s = 0; s < cfg_.steps; ++s) {
    const StepRecord rec = step();
    generated += rec.generated;
    passed += rec.passed_sw;
    novel += rec.novel;
    result.steps.push_back(rec);
  }
  if (generated > 0) {
    result.realism = static_cast<double>(passed) / static_cast<double>(generated);
    result.novelty = static_cast<double>(novel) / static_cast<double>(generated);
  }
  result.population = population_;
  result.table = table_;
  return result;
}

RunResult run(const RunConfig& cfg, const ReferenceRegistry& reg) {
  Engine engine(cfg, reg);
  return engine.run();
}

}  // namespace molevo

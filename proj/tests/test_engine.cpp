#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "molevo/engine.hpp"
#include "test_util.hpp"

using namespace molevo;
using molevo::test::chi_square_uniform;
using molevo::test::registry_from_lines;

namespace {

constexpr double kChi2Df3P01 = 11.345;
const char* kAspirin = "CC(=O)Oc1ccccc1C(=O)O";

// a corpus around the default starting molecule so that it scores 1.0
const std::vector<std::string> kTinyCorpus = {
    kAspirin, "CC(=O)Oc1ccccc1C(=O)OC", "CC(=O)Oc1ccccc1C(=O)ON", "CC(=O)Oc1ccc(C)cc1C(=O)O",
    "CC(=O)Oc1ccccc1",  "Oc1ccccc1C(=O)O",  "CC(=O)O", "CCO", "c1ccccc1", "Cc1ccccc1",
    "CC(C)Cc1ccc(cc1)C(C)C(=O)O", "CCOC(C)=O", "CC(N)=O", "CCN", "CCC", "CC(F)(F)F"};

RunConfig small_config() {
  RunConfig cfg;
  cfg.seed = 7;
  cfg.steps = 5;
  cfg.parents_per_step = 3;
  cfg.attempts_per_parent = 8;
  return cfg;
}

}  // namespace

TEST_CASE("objective is one minus the silly proportion") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  const std::vector<int> all = {0, 2, 4};
  CHECK(objective(parse_smiles(kAspirin), reg, all) == 1.0);

  const ReferenceRegistry propane = registry_from_lines({"CCC"}, 0);
  const std::vector<int> d0 = {0};
  CHECK(objective(parse_smiles("CCCCCCCNNN"), propane, d0) == doctest::Approx(0.7));
}

TEST_CASE("run config validation names fields") {
  RunConfig cfg;
  cfg.steps = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), "steps: must be > 0", std::invalid_argument);
  cfg = RunConfig{};
  cfg.context_diameter = 4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.schedule.eps_floor = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.candidates.clear();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("engine rejects an unparseable starting molecule") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  RunConfig cfg = small_config();
  cfg.init_smiles = "not a molecule";
  CHECK_THROWS_AS(Engine(cfg, reg), std::runtime_error);
}

TEST_CASE("engine rejects a registry that misses a filter diameter") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 2);
  CHECK_THROWS_AS(Engine(small_config(), reg), std::invalid_argument);
}

TEST_CASE("search_neighbour returns nothing when no mutation is valid") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  RunConfig cfg = small_config();
  cfg.init_smiles = "C";
  cfg.actions = {false, true, false, false};  // removal only
  cfg.candidates.clear();
  Engine engine(cfg, reg);
  CHECK(!engine.search_neighbour(engine.population().front()).has_value());
}

TEST_CASE("baseline search_neighbour samples uniformly") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  RunConfig cfg = small_config();
  cfg.init_smiles = "C";
  cfg.selection_mode = RunConfig::SelectionMode::uniform;
  cfg.actions = {true, false, false, false};
  Engine engine(cfg, reg);
  const Individual& parent = engine.population().front();
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 10000; ++i) {
    const auto result = engine.search_neighbour(parent);
    REQUIRE(result.has_value());
    CHECK(result->second.explored);
    ++counts[static_cast<std::size_t>(result->second.mutation.option)];
  }
  CHECK(chi_square_uniform(counts) < kChi2Df3P01);
}

TEST_CASE("policy search_neighbour concentrates on the high-rate context") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  RunConfig cfg = small_config();
  cfg.init_smiles = "C";
  cfg.actions = {true, false, false, false};
  cfg.context_diameter = 0;
  cfg.schedule = {EpsilonSchedule::Kind::constant, 1e-12, 1e-12, 0.0, 0.0};
  Engine engine(cfg, reg);
  const Individual& parent = engine.population().front();

  // one context at rate 1.0, the three others unseen
  const FingerprintSet fp = ecfp(parent.graph, 0);
  const auto valid =
      enumerate_valid_mutations(parent.graph, cfg.actions, cfg.candidates, cfg.max_heavy);
  const auto keys = context_keys_for(valid, parent.graph, fp, refinement_ranks(parent.graph));
  REQUIRE(keys.size() == 4);
  const PolicyTable seeded = [&] {
    PolicyTable t;
    t.context_diameter = 0;
    t.p_min = 0.05;
    t.stats[keys[0]] = {3, 3};
    return t;
  }();

  // expected share per the floored normalization: 1.0 / (1.0 + 3 * 0.05)
  const double expected = 1.0 / 1.15;
  int hits = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    engine.table_mutable() = seeded;
    const auto result = engine.search_neighbour(parent);
    REQUIRE(result.has_value());
    if (result->second.key == keys[0]) ++hits;
  }
  CHECK(static_cast<double>(hits) / draws == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("first step processes exactly the single initial parent") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  RunConfig cfg = small_config();
  cfg.attempts_per_parent = 1;
  Engine engine(cfg, reg);
  const StepRecord rec = engine.step();
  CHECK(rec.step == 1);
  CHECK(rec.generated == 1);
}

TEST_CASE("degenerate filter double: first attempt accepted for every parent") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  RunConfig cfg = small_config();
  cfg.parents_per_step = 4;
  Engine engine(cfg, reg);
  engine.evaluate = [](const MolecularGraph&) { return std::make_pair(true, 1.0); };
  engine.check_novelty = false;
  engine.memoize_evaluations = false;

  const StepRecord first = engine.step();
  CHECK(first.generated == 1);
  CHECK(first.inserted == 1);
  const StepRecord second = engine.step();
  CHECK(second.generated == 2);
  CHECK(second.inserted == 2);
}

TEST_CASE("step counters respect their mutual bounds") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  Engine engine(small_config(), reg);
  for (int s = 0; s < 5; ++s) {
    const StepRecord rec = engine.step();
    CHECK(rec.inserted <= rec.novel);
    CHECK(rec.novel <= rec.generated);
    CHECK(rec.passed_sw <= rec.generated);
  }
}

TEST_CASE("policy counters stay consistent through a run") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  const RunResult result = run(small_config(), reg);
  std::uint64_t total_uses = 0;
  for (const auto& [key, stats] : result.table.stats) {
    CHECK(stats.n_success <= stats.n_uses);
    total_uses += stats.n_uses;
  }
  long long generated = 0;
  for (const StepRecord& r : result.steps) generated += r.generated;
  CHECK(total_uses == static_cast<std::uint64_t>(generated));
}

TEST_CASE("runs are deterministic for a fixed seed") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  const RunResult a = run(small_config(), reg);
  const RunResult b = run(small_config(), reg);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].generated == b.steps[i].generated);
    CHECK(a.steps[i].passed_sw == b.steps[i].passed_sw);
    CHECK(a.steps[i].novel == b.steps[i].novel);
    CHECK(a.steps[i].inserted == b.steps[i].inserted);
  }
  CHECK(a.realism == b.realism);
  CHECK(a.novelty == b.novelty);
  REQUIRE(a.population.size() == b.population.size());
  for (std::size_t i = 0; i < a.population.size(); ++i) {
    CHECK(a.population[i].key == b.population[i].key);
  }

  RunConfig other = small_config();
  other.seed = 8;
  const RunResult c = run(other, reg);
  bool any_difference = c.steps.size() != a.steps.size();
  for (std::size_t i = 0; !any_difference && i < a.steps.size(); ++i) {
    any_difference = a.steps[i].generated != c.steps[i].generated ||
                     a.steps[i].novel != c.steps[i].novel;
  }
  CHECK(any_difference);
}

TEST_CASE("memoized and unmemoized runs agree") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  Engine fast(small_config(), reg);
  Engine slow(small_config(), reg);
  slow.memoize_evaluations = false;
  for (int s = 0; s < 5; ++s) {
    const StepRecord a = fast.step();
    const StepRecord b = slow.step();
    CHECK(a.generated == b.generated);
    CHECK(a.passed_sw == b.passed_sw);
    CHECK(a.novel == b.novel);
    CHECK(a.inserted == b.inserted);
  }
}

TEST_CASE("single step run emits one record") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  RunConfig cfg = small_config();
  cfg.steps = 1;
  const RunResult result = run(cfg, reg);
  CHECK(result.steps.size() == 1);
}

TEST_CASE("population invariants: unique keys, all pass the filter") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  RunConfig cfg = small_config();
  cfg.steps = 10;
  const RunResult result = run(cfg, reg);
  const std::vector<int> all = {0, 2, 4};
  std::set<CanonicalKey> keys;
  for (const Individual& ind : result.population) {
    CHECK(keys.insert(ind.key).second);
    CHECK(passes_filter(ind.graph, reg, all));
    CHECK(ind.of_score == 1.0);
  }
  CHECK(result.population.size() >= 2);  // something was inserted
}

TEST_CASE("uniform and policy modes both make progress on the tiny corpus") {
  const ReferenceRegistry reg = registry_from_lines(kTinyCorpus, 4);
  RunConfig cfg = small_config();
  cfg.steps = 10;
  const RunResult rl = run(cfg, reg);
  cfg.selection_mode = RunConfig::SelectionMode::uniform;
  const RunResult base = run(cfg, reg);
  CHECK(rl.realism > 0.0);
  CHECK(base.realism > 0.0);
  CHECK(rl.realism < 1.0 + 1e-12);
  CHECK(base.novelty > 0.0);
}

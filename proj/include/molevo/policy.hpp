#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "molevo/fingerprint.hpp"
#include "molevo/graph.hpp"
#include "molevo/rng.hpp"

namespace molevo {

// Key of one mutation context: the action, the focal atom's environment
// identifier at the configured context diameter, and the action option
// (candidate index for AddA, target bond order for ChB, -1 for RmA).
struct ContextKey {
  MutationKind action = MutationKind::AddA;
  EcfpId env_id = 0;
  int option = -1;

  bool operator==(const ContextKey&) const = default;
};

struct ContextKeyHash {
  std::size_t operator()(const ContextKey& k) const {
    IdHasher h;
    h.add(static_cast<std::uint64_t>(k.action));
    h.add(k.env_id);
    h.add_signed(k.option);
    return static_cast<std::size_t>(h.finish());
  }
};

struct ContextStats {
  std::uint64_t n_uses = 0;
  std::uint64_t n_success = 0;
};

// Empirical success rate; unseen contexts report 0 and rely on the
// p_min floor inside weights().
double success_rate(const ContextStats& s);

// w_j = max(p_min, rate_j) / sum_k max(p_min, rate_k). Sums to 1, every
// entry strictly positive. Throws std::invalid_argument on an empty list.
std::vector<double> weights(std::span<const double> rates, double p_min);

struct EpsilonSchedule {
  enum class Kind { constant, greedy, power_law };
  Kind kind = Kind::constant;
  double eps_floor = 0.1;
  double eps0 = 1.0;
  double lambda = 0.0;  // greedy only
  double alpha = 0.0;   // power_law only
};

// constant: eps_floor
// greedy:   max(eps_floor, eps0 * exp(-lambda * t))
// power_law:max(eps_floor, eps0 / (1 + t)^alpha)
double epsilon_at(const EpsilonSchedule& sch, std::uint64_t t);

struct PolicyTable {
  std::unordered_map<ContextKey, ContextStats, ContextKeyHash> stats;
  double p_min = 0.05;
  int context_diameter = 2;  // 0 or 2

  const ContextStats& stats_for(const ContextKey& key) const;
};

struct SelectionOutcome {
  Mutation mutation;
  ContextKey key;
  std::size_t index = 0;  // position of the pick within the valid list
  bool explored = false;
  std::optional<double> weight_used;  // set on the exploitation branch only
};

// Context keys for every mutation in `valid`, against a fingerprint of the
// graph the mutations were enumerated on. The ChB focal atom is the endpoint
// with the smaller refinement rank.
std::vector<ContextKey> context_keys_for(std::span<const Mutation> valid,
                                         const MolecularGraph& g,
                                         const FingerprintSet& fp,
                                         std::span<const int> ranks);

// Sleeping-bandit probability-matching selection over the awake mutations.
// Draw order: one uniform u (explore/exploit), then one draw for the pick.
// With probability epsilon_at(sch, t) the pick is uniform over `valid`;
// otherwise mutations are weighted by their contexts' floored success rates.
// The chosen context's n_uses is incremented exactly once.
// invert_exploration flips the branch condition (ablation switch).
SelectionOutcome select(std::span<const Mutation> valid, std::span<const ContextKey> keys,
                        PolicyTable& table, const EpsilonSchedule& sch, std::uint64_t t,
                        Rng& rng, bool invert_exploration = false);

// Convenience overload that derives the context keys itself.
SelectionOutcome select(std::span<const Mutation> valid, const MolecularGraph& g,
                        PolicyTable& table, const EpsilonSchedule& sch, std::uint64_t t,
                        Rng& rng);

// Adds a binary reward to the context chosen by the select() that produced
// the key. Throws std::invalid_argument for rewards outside {0,1}.
void record(PolicyTable& table, const ContextKey& key, int reward);

// Reporting encoding of a context index: pos + option_idx * (n + 1) for a
// 1-based position in a frozen environment listing of size n. The live
// policy keys on ContextKey tuples; this exists for diagnostics dumps.
std::uint64_t encode_index(int pos, int option_idx, int n);

}  // namespace molevo

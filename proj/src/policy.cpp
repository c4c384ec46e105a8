#include "molevo/policy.hpp"

#include <cmath>
#include <stdexcept>

#include "molevo/smiles.hpp"

namespace molevo {

double success_rate(const ContextStats& s) {
  if (s.n_uses == 0) return 0.0;
  return static_cast<double>(s.n_success) / static_cast<double>(s.n_uses);
}

std::vector<double> weights(std::span<const double> rates, double p_min) {
  if (rates.empty()) throw std::invalid_argument("weights: empty rate list");
  if (p_min <= 0.0) throw std::invalid_argument("weights: p_min must be positive");
  std::vector<double> floored(rates.size());
  double total = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    floored[i] = std::max(p_min, rates[i]);
    total += floored[i];
  }
  for (double& w : floored) w /= total;
  return floored;
}

double epsilon_at(const EpsilonSchedule& sch, std::uint64_t t) {
  switch (sch.kind) {
    case EpsilonSchedule::Kind::constant:
      return sch.eps_floor;
    case EpsilonSchedule::Kind::greedy:
      return std::max(sch.eps_floor, sch.eps0 * std::exp(-sch.lambda * static_cast<double>(t)));
    case EpsilonSchedule::Kind::power_law:
      return std::max(sch.eps_floor,
                      sch.eps0 / std::pow(1.0 + static_cast<double>(t), sch.alpha));
  }
  return sch.eps_floor;
}

const ContextStats& PolicyTable::stats_for(const ContextKey& key) const {
  static const ContextStats kUnseen{};
  const auto it = stats.find(key);
  return it == stats.end() ? kUnseen : it->second;
}

std::vector<ContextKey> context_keys_for(std::span<const Mutation> valid,
                                         const MolecularGraph& g,
                                         const FingerprintSet& fp,
                                         std::span<const int> ranks) {
  (void)g;  // the fingerprint and ranks already carry everything needed
  const int radius = fp.max_radius();
  std::vector<ContextKey> keys;
  keys.reserve(valid.size());
  for (const Mutation& m : valid) {
    int focal = m.position;
    if (m.kind == MutationKind::ChB) {
      const int ru = ranks[static_cast<std::size_t>(m.position)];
      const int rv = ranks[static_cast<std::size_t>(m.partner)];
      focal = (rv < ru) ? m.partner : m.position;
    }
    keys.push_back({m.kind, fp.atom_id(focal, radius), m.option});
  }
  return keys;
}

SelectionOutcome select(std::span<const Mutation> valid, std::span<const ContextKey> keys,
                        PolicyTable& table, const EpsilonSchedule& sch, std::uint64_t t,
                        Rng& rng, bool invert_exploration) {
  if (valid.empty()) throw std::invalid_argument("select: empty mutation list");

  SelectionOutcome out;
  const double u = rng.next_double();
  const bool explore = invert_exploration ? (u >= epsilon_at(sch, t)) : (u < epsilon_at(sch, t));
  if (explore) {
    out.index = rng.next_index(valid.size());
    out.explored = true;
  } else {
    std::vector<double> rates(valid.size());
    for (std::size_t i = 0; i < valid.size(); ++i) {
      rates[i] = success_rate(table.stats_for(keys[i]));
    }
    const std::vector<double> w = weights(rates, table.p_min);
    const double roll = rng.next_double();
    double cumulative = 0.0;
    out.index = valid.size() - 1;  // guards the roll == sum-epsilon edge
    for (std::size_t i = 0; i < w.size(); ++i) {
      cumulative += w[i];
      if (roll < cumulative) {
        out.index = i;
        break;
      }
    }
    out.explored = false;
    out.weight_used = w[out.index];
  }
  out.mutation = valid[out.index];
  out.key = keys[out.index];
  ++table.stats[out.key].n_uses;
  return out;
}

SelectionOutcome select(std::span<const Mutation> valid, const MolecularGraph& g,
                        PolicyTable& table, const EpsilonSchedule& sch, std::uint64_t t,
                        Rng& rng) {
  const FingerprintSet fp = ecfp(g, table.context_diameter);
  const std::vector<int> ranks = refinement_ranks(g);
  const std::vector<ContextKey> keys = context_keys_for(valid, g, fp, ranks);
  return select(valid, keys, table, sch, t, rng);
}

void record(PolicyTable& table, const ContextKey& key, int reward) {
  if (reward != 0 && reward != 1) {
    throw std::invalid_argument("record: reward must be 0 or 1");
  }
  ContextStats& s = table.stats[key];
  s.n_success += static_cast<std::uint64_t>(reward);
  if (s.n_success > s.n_uses) {
    throw std::logic_error("record: n_success exceeded n_uses; reward without selection");
  }
}

std::uint64_t encode_index(int pos, int option_idx, int n) {
  if (pos < 1 || pos > n) throw std::out_of_range("encode_index: position outside 1..n");
  if (option_idx < 0) throw std::out_of_range("encode_index: negative option index");
  return static_cast<std::uint64_t>(pos) +
         static_cast<std::uint64_t>(option_idx) * static_cast<std::uint64_t>(n + 1);
}

}  // namespace molevo

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace molevo {

// Heavy-atom set with single default valences. Hydrogens are implicit:
// the hydrogen count of an atom is its free valence.
enum class Element : std::uint8_t { C, N, O, F, P, S, Cl, Br };

constexpr int kElementCount = 8;

int max_valence(Element e);
int atomic_number(Element e);
std::string_view element_symbol(Element e);
std::optional<Element> element_from_symbol(std::string_view s);

struct Atom {
  Element element = Element::C;
  // Carried for parsed inputs; mutations never create or modify charges.
  std::int8_t formal_charge = 0;
};

// Undirected bond, endpoints normalized to a < b, order in {1,2,3}.
struct Bond {
  int a = 0;
  int b = 0;
  int order = 1;
};

// Connected labeled graph of heavy atoms. Immutable after construction;
// every operation that changes a molecule returns a new graph.
// Atom indices are 0-based and follow construction order (for parsed
// molecules, SMILES order).
class MolecularGraph {
 public:
  // Validates valence, connectivity and non-emptiness; throws
  // std::invalid_argument on violation.
  MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds);

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  const Atom& atom(int v) const;
  std::span<const Bond> bonds() const { return bonds_; }

  // (neighbor, bond order) pairs, sorted by neighbor index.
  std::span<const std::pair<int, int>> neighbors(int v) const;

  // 0 when the atoms are not bonded.
  int bond_order_between(int u, int v) const;
  int bond_order_sum(int v) const;
  int degree(int v) const;

  bool operator==(const MolecularGraph& other) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;                            // sorted by (a, b)
  std::vector<std::vector<std::pair<int, int>>> adj_;  // per-vertex, sorted
};

enum class MutationKind : std::uint8_t { AddA, RmA, ChB };

std::string_view mutation_kind_name(MutationKind k);
std::optional<MutationKind> mutation_kind_from_name(std::string_view s);

// One elementary action on a graph.
//   AddA: position = anchor atom, option = index into the candidate set.
//   RmA : position = atom to remove, option and partner unused.
//   ChB : position = smaller endpoint, partner = larger endpoint,
//         option = target bond order (0 deletes the bond when enabled).
struct Mutation {
  MutationKind kind = MutationKind::AddA;
  int position = 0;
  int option = -1;
  int partner = -1;

  bool operator==(const Mutation&) const = default;
};

struct ActionMask {
  bool add_atom = true;
  bool remove_atom = true;
  bool change_bond = true;
  // Bond deletion can only break rings (never fragments); off by default.
  bool allow_bond_deletion = false;
};

// Max valence minus the sum of incident bond orders; equals the implicit
// hydrogen count. Throws std::out_of_range for a bad index.
int free_valence(const MolecularGraph& g, int v);

bool is_connected(const MolecularGraph& g);

// Exactly the mutations whose application preserves all graph invariants,
// in deterministic (kind, position, partner, option) order.
std::vector<Mutation> enumerate_valid_mutations(const MolecularGraph& g,
                                                const ActionMask& actions,
                                                std::span<const Element> candidates,
                                                int max_heavy);

// Returns the mutated graph; the input is unchanged. After RmA, atoms above
// the removed index shift down by one. Throws std::invalid_argument when the
// mutation is not valid for this graph.
MolecularGraph apply_mutation(const MolecularGraph& g, const Mutation& m,
                              std::span<const Element> candidates);

}  // namespace molevo

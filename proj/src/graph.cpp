#include "molevo/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace molevo {

namespace {

struct ElementInfo {
  std::string_view symbol;
  int max_valence;
  int atomic_number;
};

constexpr ElementInfo kElements[kElementCount] = {
    {"C", 4, 6}, {"N", 3, 7},  {"O", 2, 8},  {"F", 1, 9},
    {"P", 3, 15}, {"S", 2, 16}, {"Cl", 1, 17}, {"Br", 1, 35},
};

}  // namespace

int max_valence(Element e) { return kElements[static_cast<int>(e)].max_valence; }
int atomic_number(Element e) { return kElements[static_cast<int>(e)].atomic_number; }
std::string_view element_symbol(Element e) { return kElements[static_cast<int>(e)].symbol; }

std::optional<Element> element_from_symbol(std::string_view s) {
  for (int i = 0; i < kElementCount; ++i) {
    if (kElements[i].symbol == s) return static_cast<Element>(i);
  }
  return std::nullopt;
}

std::string_view mutation_kind_name(MutationKind k) {
  switch (k) {
    case MutationKind::AddA: return "AddA";
    case MutationKind::RmA: return "RmA";
    case MutationKind::ChB: return "ChB";
  }
  return "?";
}

std::optional<MutationKind> mutation_kind_from_name(std::string_view s) {
  if (s == "AddA") return MutationKind::AddA;
  if (s == "RmA") return MutationKind::RmA;
  if (s == "ChB") return MutationKind::ChB;
  return std::nullopt;
}

MolecularGraph::MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds)
    : atoms_(std::move(atoms)) {
  const int n = static_cast<int>(atoms_.size());
  if (n == 0) throw std::invalid_argument("molecule must have at least one atom");

  bonds_.reserve(bonds.size());
  for (Bond b : bonds) {
    if (b.a > b.b) std::swap(b.a, b.b);
    if (b.a < 0 || b.b >= n) throw std::invalid_argument("bond endpoint out of range");
    if (b.a == b.b) throw std::invalid_argument("bond endpoints must be distinct");
    if (b.order < 1 || b.order > 3) throw std::invalid_argument("bond order must be 1..3");
    bonds_.push_back(b);
  }
  std::sort(bonds_.begin(), bonds_.end(),
            [](const Bond& x, const Bond& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  for (std::size_t i = 1; i < bonds_.size(); ++i) {
    if (bonds_[i - 1].a == bonds_[i].a && bonds_[i - 1].b == bonds_[i].b) {
      throw std::invalid_argument("duplicate bond between a vertex pair");
    }
  }

  adj_.assign(n, {});
  for (const Bond& b : bonds_) {
    adj_[b.a].emplace_back(b.b, b.order);
    adj_[b.b].emplace_back(b.a, b.order);
  }
  for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());

  for (int v = 0; v < n; ++v) {
    if (bond_order_sum(v) > max_valence(atoms_[v].element)) {
      throw std::invalid_argument("valence exceeded at atom " + std::to_string(v));
    }
  }
  if (!is_connected(*this)) throw std::invalid_argument("molecule must be connected");
}

const Atom& MolecularGraph::atom(int v) const {
  if (v < 0 || v >= atom_count()) throw std::out_of_range("atom index out of range");
  return atoms_[static_cast<std::size_t>(v)];
}

std::span<const std::pair<int, int>> MolecularGraph::neighbors(int v) const {
  if (v < 0 || v >= atom_count()) throw std::out_of_range("atom index out of range");
  return adj_[static_cast<std::size_t>(v)];
}

int MolecularGraph::bond_order_between(int u, int v) const {
  for (const auto& [nbr, order] : neighbors(u)) {
    if (nbr == v) return order;
  }
  return 0;
}

int MolecularGraph::bond_order_sum(int v) const {
  int sum = 0;
  for (const auto& [nbr, order] : neighbors(v)) sum += order;
  return sum;
}

int MolecularGraph::degree(int v) const {
  return static_cast<int>(neighbors(v).size());
}

bool MolecularGraph::operator==(const MolecularGraph& other) const {
  if (atoms_.size() != other.atoms_.size() || bonds_.size() != other.bonds_.size()) return false;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].element != other.atoms_[i].element ||
        atoms_[i].formal_charge != other.atoms_[i].formal_charge) {
      return false;
    }
  }
  for (std::size_t i = 0; i < bonds_.size(); ++i) {
    if (bonds_[i].a != other.bonds_[i].a || bonds_[i].b != other.bonds_[i].b ||
        bonds_[i].order != other.bonds_[i].order) {
      return false;
    }
  }
  return true;
}

int free_valence(const MolecularGraph& g, int v) {
  return max_valence(g.atom(v).element) - g.bond_order_sum(v);
}

namespace {

// Reachable count from `start`, optionally pretending `skip` was removed.
int reachable_count(const MolecularGraph& g, int start, int skip) {
  const int n = g.atom_count();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{start};
  seen[static_cast<std::size_t>(start)] = 1;
  int count = 0;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    ++count;
    for (const auto& [w, order] : g.neighbors(u)) {
      (void)order;
      if (w == skip || seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      stack.push_back(w);
    }
  }
  return count;
}

bool connected_without_atom(const MolecularGraph& g, int v) {
  const int n = g.atom_count();
  if (n <= 1) return false;  // removal would empty the molecule
  const int start = (v == 0) ? 1 : 0;
  return reachable_count(g, start, v) == n - 1;
}

// Connectivity if the u-v bond were deleted.
bool connected_without_bond(const MolecularGraph& g, int u, int v) {
  const int n = g.atom_count();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{u};
  seen[static_cast<std::size_t>(u)] = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    if (x == v) return true;
    for (const auto& [w, order] : g.neighbors(x)) {
      (void)order;
      if ((x == u && w == v) || (x == v && w == u)) continue;
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      stack.push_back(w);
    }
  }
  return false;
}

bool change_bond_valid(const MolecularGraph& g, int u, int v, int target, bool allow_delete) {
  const int current = g.bond_order_between(u, v);
  if (target == current) return false;
  if (target < 0 || target > 3) return false;
  if (target == 0) {
    if (!allow_delete || current == 0) return false;
    return connected_without_bond(g, u, v);
  }
  if (target > current) {
    const int extra = target - current;
    return free_valence(g, u) >= extra && free_valence(g, v) >= extra;
  }
  return true;  // lowering within 1..3 keeps the bond and frees valence
}

}  // namespace

bool is_connected(const MolecularGraph& g) {
  return reachable_count(g, 0, -1) == g.atom_count();
}

std::vector<Mutation> enumerate_valid_mutations(const MolecularGraph& g,
                                                const ActionMask& actions,
                                                std::span<const Element> candidates,
                                                int max_heavy) {
  std::vector<Mutation> out;
  const int n = g.atom_count();

  if (actions.add_atom && n < max_heavy) {
    for (int v = 0; v < n; ++v) {
      if (free_valence(g, v) < 1) continue;
      for (int c = 0; c < static_cast<int>(candidates.size()); ++c) {
        out.push_back({MutationKind::AddA, v, c, -1});
      }
    }
  }

  if (actions.remove_atom && n > 1) {
    for (int v = 0; v < n; ++v) {
      if (connected_without_atom(g, v)) out.push_back({MutationKind::RmA, v, -1, -1});
    }
  }

  if (actions.change_bond) {
    const int lowest = actions.allow_bond_deletion ? 0 : 1;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        for (int target = lowest; target <= 3; ++target) {
          if (change_bond_valid(g, u, v, target, actions.allow_bond_deletion)) {
            out.push_back({MutationKind::ChB, u, target, v});
          }
        }
      }
    }
  }

  // Enumeration order doubles as the tie-break for seeded sampling.
  std::sort(out.begin(), out.end(), [](const Mutation& x, const Mutation& y) {
    return std::tie(x.kind, x.position, x.partner, x.option) <
           std::tie(y.kind, y.position, y.partner, y.option);
  });
  return out;
}

MolecularGraph apply_mutation(const MolecularGraph& g, const Mutation& m,
                              std::span<const Element> candidates) {
  const int n = g.atom_count();
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  atoms.reserve(static_cast<std::size_t>(n) + 1);
  for (int v = 0; v < n; ++v) atoms.push_back(g.atom(v));
  bonds.assign(g.bonds().begin(), g.bonds().end());

  switch (m.kind) {
    case MutationKind::AddA: {
      if (m.position < 0 || m.position >= n || m.option < 0 ||
          m.option >= static_cast<int>(candidates.size()) ||
          free_valence(g, m.position) < 1) {
        throw std::invalid_argument("invalid AddA mutation");
      }
      atoms.push_back({candidates[static_cast<std::size_t>(m.option)], 0});
      bonds.push_back({m.position, n, 1});
      break;
    }
    case MutationKind::RmA: {
      if (m.position < 0 || m.position >= n || !connected_without_atom(g, m.position)) {
        throw std::invalid_argument("invalid RmA mutation");
      }
      atoms.erase(atoms.begin() + m.position);
      std::vector<Bond> kept;
      for (const Bond& b : bonds) {
        if (b.a == m.position || b.b == m.position) continue;
        Bond shifted = b;
        if (shifted.a > m.position) --shifted.a;
        if (shifted.b > m.position) --shifted.b;
        kept.push_back(shifted);
      }
      bonds = std::move(kept);
      break;
    }
    case MutationKind::ChB: {
      const int u = m.position;
      const int v = m.partner;
      if (u < 0 || v <= u || v >= n ||
          !change_bond_valid(g, u, v, m.option, /*allow_delete=*/m.option == 0)) {
        throw std::invalid_argument("invalid ChB mutation");
      }
      const int current = g.bond_order_between(u, v);
      if (current == 0) {
        bonds.push_back({u, v, m.option});
      } else if (m.option == 0) {
        std::erase_if(bonds, [&](const Bond& b) { return b.a == u && b.b == v; });
      } else {
        for (Bond& b : bonds) {
          if (b.a == u && b.b == v) b.order = m.option;
        }
      }
      break;
    }
  }
  return MolecularGraph(std::move(atoms), std::move(bonds));
}

}  // namespace molevo

#include "molevo/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

namespace molevo {

namespace {

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct ParsedAtom {
  Element element = Element::C;
  int charge = 0;
  bool aromatic = false;
  int stated_h = -1;  // bracket H count, -1 when not written
  std::size_t src_pos = 0;
};

struct ParsedBond {
  int a = 0;
  int b = 0;
  int order = 0;  // 0 = unspecified in the input
  bool aromatic = false;
  std::size_t src_pos = 0;
};

struct RingOpening {
  int atom = 0;
  int pending_order = 0;
  std::size_t src_pos = 0;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  void run() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '-' || c == '=' || c == '#') {
        if (pending_order_ != 0) fail("duplicate bond symbol");
        pending_order_ = (c == '-') ? 1 : (c == '=') ? 2 : 3;
        ++pos_;
      } else if (c == '(') {
        if (prev_ < 0) fail("branch before any atom");
        branch_stack_.push_back(prev_);
        ++pos_;
      } else if (c == ')') {
        if (branch_stack_.empty()) fail("unmatched ')'");
        if (pending_order_ != 0) fail("dangling bond symbol before ')'");
        prev_ = branch_stack_.back();
        branch_stack_.pop_back();
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        ring_closure();
      } else if (c == '[') {
        bracket_atom();
      } else if (c == '.') {
        fail("multi-fragment input is not supported");
      } else if (c == '/' || c == '\\' || c == '@') {
        fail("stereo markers are not supported");
      } else {
        organic_atom();
      }
    }
    if (atoms_.empty()) fail("empty input");
    if (pending_order_ != 0) fail("dangling bond symbol at end of input");
    if (!branch_stack_.empty()) fail("unclosed '('");
    if (!open_rings_.empty()) {
      throw ParseError("unclosed ring bond", open_rings_.begin()->second.src_pos);
    }
  }

  std::vector<ParsedAtom>& atoms() { return atoms_; }
  std::vector<ParsedBond>& bonds() { return bonds_; }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void add_atom(ParsedAtom atom) {
    atom.src_pos = pos_;
    const int idx = static_cast<int>(atoms_.size());
    atoms_.push_back(atom);
    if (prev_ >= 0) {
      const bool aromatic_bond =
          pending_order_ == 0 && atoms_[static_cast<std::size_t>(prev_)].aromatic && atom.aromatic;
      bonds_.push_back({prev_, idx, pending_order_, aromatic_bond, pos_});
    }
    pending_order_ = 0;
    prev_ = idx;
  }

  void organic_atom() {
    ParsedAtom atom;
    const char c = text_[pos_];
    std::size_t len = 1;
    if ((c == 'C' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'l') ||
        (c == 'B' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'r')) {
      len = 2;
    }
    const std::string_view sym = std::string_view(text_).substr(pos_, len);
    if (sym == "c" || sym == "n" || sym == "o" || sym == "s") {
      atom.aromatic = true;
      const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      atom.element = *element_from_symbol(std::string_view(&up, 1));
    } else if (auto e = element_from_symbol(sym)) {
      atom.element = *e;
    } else {
      fail(std::string("unsupported atom symbol '") + std::string(sym) + "'");
    }
    add_atom(atom);
    pos_ += len;
  }

  void bracket_atom() {
    const std::size_t open = pos_;
    ++pos_;  // '['
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("isotopes are not supported");
    }
    ParsedAtom atom;
    if (pos_ >= text_.size()) throw ParseError("unterminated bracket atom", open);
    char c = text_[pos_];
    if (c == 'c' || c == 'n' || c == 'o' || c == 's') {
      atom.aromatic = true;
      const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      atom.element = *element_from_symbol(std::string_view(&up, 1));
      ++pos_;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::size_t len = 1;
      if (pos_ + 1 < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_ + 1])) &&
          text_[pos_ + 1] != 'c' && text_[pos_ + 1] != 'n' && text_[pos_ + 1] != 'o' &&
          text_[pos_ + 1] != 's') {
        len = 2;
      }
      auto e = element_from_symbol(std::string_view(text_).substr(pos_, len));
      if (!e && len == 2) e = element_from_symbol(std::string_view(text_).substr(pos_, 1)), len = 1;
      if (!e) fail("unsupported element in bracket atom");
      atom.element = *e;
      pos_ += len;
    } else {
      fail("expected element symbol in bracket atom");
    }
    if (pos_ < text_.size() && text_[pos_] == 'H') {
      ++pos_;
      int h = 1;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        h = text_[pos_] - '0';
        ++pos_;
      }
      atom.stated_h = h;
    }
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const char sign = text_[pos_];
      ++pos_;
      int magnitude = 1;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        magnitude = text_[pos_] - '0';
        ++pos_;
      } else {
        while (pos_ < text_.size() && text_[pos_] == sign) {
          ++magnitude;
          ++pos_;
        }
      }
      if (magnitude > 3) fail("formal charge magnitude above 3");
      atom.charge = (sign == '+') ? magnitude : -magnitude;
    }
    if (pos_ >= text_.size() || text_[pos_] != ']') fail("expected ']'");
    add_atom(atom);
    ++pos_;  // ']'
  }

  void ring_closure() {
    if (prev_ < 0) fail("ring bond before any atom");
    int number;
    if (text_[pos_] == '%') {
      if (pos_ + 2 >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
        fail("'%' ring bond needs two digits");
      }
      number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      number = text_[pos_] - '0';
      ++pos_;
    }
    auto it = open_rings_.find(number);
    if (it == open_rings_.end()) {
      open_rings_[number] = {prev_, pending_order_, pos_};
    } else {
      const RingOpening opening = it->second;
      open_rings_.erase(it);
      if (opening.atom == prev_) fail("ring bond to the same atom");
      int order = 0;
      if (opening.pending_order != 0 && pending_order_ != 0 &&
          opening.pending_order != pending_order_) {
        fail("conflicting ring-closure bond orders");
      }
      order = (opening.pending_order != 0) ? opening.pending_order : pending_order_;
      const bool aromatic_bond = order == 0 &&
                                 atoms_[static_cast<std::size_t>(opening.atom)].aromatic &&
                                 atoms_[static_cast<std::size_t>(prev_)].aromatic;
      bonds_.push_back({opening.atom, prev_, order, aromatic_bond, pos_});
    }
    pending_order_ = 0;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int prev_ = -1;
  int pending_order_ = 0;
  std::vector<int> branch_stack_;
  std::map<int, RingOpening> open_rings_;
  std::vector<ParsedAtom> atoms_;
  std::vector<ParsedBond> bonds_;
};

// Assigns alternating orders to the aromatic subgraph: every aromatic atom
// with spare valence must receive exactly one double bond, found as a
// perfect matching over the candidate edges (backtracking search).
void kekulize(std::vector<ParsedAtom>& atoms, std::vector<ParsedBond>& bonds) {
  const int n = static_cast<int>(atoms.size());
  std::vector<int> order_sum(static_cast<std::size_t>(n), 0);
  for (const ParsedBond& b : bonds) {
    const int o = (b.order == 0) ? 1 : b.order;
    order_sum[static_cast<std::size_t>(b.a)] += o;
    order_sum[static_cast<std::size_t>(b.b)] += o;
  }

  std::vector<char> needs(static_cast<std::size_t>(n), 0);
  std::vector<int> needs_atoms;
  for (int v = 0; v < n; ++v) {
    const ParsedAtom& a = atoms[static_cast<std::size_t>(v)];
    if (!a.aromatic) continue;
    const int stated = (a.stated_h >= 0) ? a.stated_h : 0;
    if (max_valence(a.element) - order_sum[static_cast<std::size_t>(v)] - stated >= 1) {
      needs[static_cast<std::size_t>(v)] = 1;
      needs_atoms.push_back(v);
    }
  }

  std::vector<std::vector<std::pair<int, int>>> cand(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    const ParsedBond& b = bonds[i];
    if (!b.aromatic) continue;
    if (needs[static_cast<std::size_t>(b.a)] && needs[static_cast<std::size_t>(b.b)]) {
      cand[static_cast<std::size_t>(b.a)].emplace_back(b.b, static_cast<int>(i));
      cand[static_cast<std::size_t>(b.b)].emplace_back(b.a, static_cast<int>(i));
    }
  }

  std::vector<int> mate(static_cast<std::size_t>(n), -1);
  std::vector<char> bond_double(bonds.size(), 0);

  auto solve = [&](auto&& self, std::size_t idx) -> bool {
    while (idx < needs_atoms.size() && mate[static_cast<std::size_t>(needs_atoms[idx])] >= 0) {
      ++idx;
    }
    if (idx >= needs_atoms.size()) return true;
    const int v = needs_atoms[idx];
    for (const auto& [u, bond_idx] : cand[static_cast<std::size_t>(v)]) {
      if (mate[static_cast<std::size_t>(u)] >= 0) continue;
      mate[static_cast<std::size_t>(v)] = u;
      mate[static_cast<std::size_t>(u)] = v;
      bond_double[static_cast<std::size_t>(bond_idx)] = 1;
      if (self(self, idx + 1)) return true;
      mate[static_cast<std::size_t>(v)] = -1;
      mate[static_cast<std::size_t>(u)] = -1;
      bond_double[static_cast<std::size_t>(bond_idx)] = 0;
    }
    return false;
  };

  if (!solve(solve, 0)) {
    std::size_t where = 0;
    for (int v : needs_atoms) {
      if (mate[static_cast<std::size_t>(v)] < 0) {
        where = atoms[static_cast<std::size_t>(v)].src_pos;
        break;
      }
    }
    throw ParseError("kekulization failure: no alternating bond assignment", where);
  }

  for (std::size_t i = 0; i < bonds.size(); ++i) {
    if (bonds[i].order == 0) bonds[i].order = bond_double[i] ? 2 : 1;
  }
}

// ---------------------------------------------------------------------------
// Canonical ranking: iterative refinement plus individualization. Ties left
// by the stable partition are explored exhaustively (branching on the first
// non-singleton class, members in index order) and the lexicographically
// smallest serialization wins, which keeps the output relabeling-invariant.
// ---------------------------------------------------------------------------

struct RefineKey {
  int color = 0;
  int deg = 0;
  std::array<std::pair<int, int>, 4> nb{};  // (bond order, neighbor color)

  auto tie() const { return std::tie(color, deg, nb); }
  bool operator<(const RefineKey& o) const { return tie() < o.tie(); }
  bool operator==(const RefineKey& o) const { return tie() == o.tie(); }
};

int rerank(const std::vector<RefineKey>& keys, std::vector<int>& colors) {
  const std::size_t n = keys.size();
  std::vector<int> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)]; });
  int color = 0;
  colors[static_cast<std::size_t>(idx[0])] = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(keys[static_cast<std::size_t>(idx[i])] == keys[static_cast<std::size_t>(idx[i - 1])])) ++color;
    colors[static_cast<std::size_t>(idx[i])] = color;
  }
  return color + 1;
}

int refine(const MolecularGraph& g, std::vector<int>& colors) {
  const int n = g.atom_count();
  std::vector<RefineKey> keys(static_cast<std::size_t>(n));
  // normalize whatever color seed came in
  for (int i = 0; i < n; ++i) {
    keys[static_cast<std::size_t>(i)] = {colors[static_cast<std::size_t>(i)], 0, {}};
  }
  int classes = rerank(keys, colors);
  while (true) {
    for (int v = 0; v < n; ++v) {
      RefineKey& k = keys[static_cast<std::size_t>(v)];
      k.color = colors[static_cast<std::size_t>(v)];
      k.deg = g.degree(v);
      k.nb = {};
      int i = 0;
      for (const auto& [u, order] : g.neighbors(v)) {
        k.nb[static_cast<std::size_t>(i++)] = {order, colors[static_cast<std::size_t>(u)]};
      }
      std::sort(k.nb.begin(), k.nb.begin() + i);
    }
    const int next = rerank(keys, colors);
    if (next == classes) return classes;
    classes = next;
  }
}

// Seed partition: (element, charge, degree, incident bond-order sum),
// packed into one integer since every component is small.
std::vector<int> initial_colors(const MolecularGraph& g) {
  const int n = g.atom_count();
  std::vector<RefineKey> keys(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const Atom& a = g.atom(v);
    const int packed = (((static_cast<int>(a.element) * 32 + a.formal_charge + 8) * 8 +
                         g.degree(v)) * 8) + g.bond_order_sum(v);
    keys[static_cast<std::size_t>(v)] = {packed, 0, {}};
  }
  std::vector<int> colors(static_cast<std::size_t>(n), 0);
  rerank(keys, colors);
  return colors;
}

std::string atom_token(const Atom& a) {
  std::string sym(element_symbol(a.element));
  if (a.formal_charge == 0) return sym;
  std::string out = "[" + sym;
  const int q = a.formal_charge;
  out += (q > 0) ? '+' : '-';
  if (std::abs(q) > 1) out += std::to_string(std::abs(q));
  out += ']';
  return out;
}

std::string bond_token(int order) {
  if (order == 2) return "=";
  if (order == 3) return "#";
  return "";
}

std::string digit_token(int number) {
  if (number < 10) return std::string(1, static_cast<char>('0' + number));
  return "%" + std::to_string(number);
}

// Serialize following a complete canonical ranking: DFS from the rank-0
// atom, neighbors in rank order, ring-closure digits in discovery order.
std::string emit(const MolecularGraph& g, const std::vector<int>& rank) {
  const int n = g.atom_count();
  std::vector<int> by_rank(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) by_rank[static_cast<std::size_t>(rank[static_cast<std::size_t>(v)])] = v;

  std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
  std::vector<std::vector<std::pair<int, int>>> ring_tokens(static_cast<std::size_t>(n));
  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  std::set<std::pair<int, int>> ring_edges;
  int next_digit = 1;

  auto ranked_neighbors = [&](int v) {
    std::vector<int> nbrs;
    for (const auto& [u, order] : g.neighbors(v)) {
      (void)order;
      nbrs.push_back(u);
    }
    std::sort(nbrs.begin(), nbrs.end(), [&](int a, int b) {
      return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)];
    });
    return nbrs;
  };

  auto walk = [&](auto&& self, int v, int parent) -> void {
    visited[static_cast<std::size_t>(v)] = 1;
    for (int u : ranked_neighbors(v)) {
      if (u == parent) continue;
      if (visited[static_cast<std::size_t>(u)]) {
        // back edge; fires from both endpoints, record it once
        if (!ring_edges.insert({std::min(u, v), std::max(u, v)}).second) continue;
        const int digit = next_digit++;
        const int order = g.bond_order_between(v, u);
        ring_tokens[static_cast<std::size_t>(v)].emplace_back(digit, order);
        ring_tokens[static_cast<std::size_t>(u)].emplace_back(digit, order);
      } else {
        children[static_cast<std::size_t>(v)].push_back(u);
        self(self, u, v);
      }
    }
  };
  const int root = by_rank[0];
  walk(walk, root, -1);

  std::string out;
  auto write = [&](auto&& self, int v) -> void {
    out += atom_token(g.atom(v));
    auto tokens = ring_tokens[static_cast<std::size_t>(v)];
    std::sort(tokens.begin(), tokens.end());
    for (const auto& [digit, order] : tokens) {
      out += bond_token(order);
      out += digit_token(digit);
    }
    const auto& kids = children[static_cast<std::size_t>(v)];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool last = (i + 1 == kids.size());
      if (!last) out += '(';
      out += bond_token(g.bond_order_between(v, kids[i]));
      self(self, kids[i]);
      if (!last) out += ')';
    }
  };
  write(write, root);
  return out;
}

void canon_search(const MolecularGraph& g, std::vector<int> colors, std::string& best) {
  const int n = g.atom_count();
  const int classes = refine(g, colors);
  if (classes == n) {
    std::string s = emit(g, colors);
    if (best.empty() || s < best) best = std::move(s);
    return;
  }
  int target_color = -1;
  {
    std::vector<int> count(static_cast<std::size_t>(classes), 0);
    for (int v = 0; v < n; ++v) ++count[static_cast<std::size_t>(colors[static_cast<std::size_t>(v)])];
    for (int c = 0; c < classes; ++c) {
      if (count[static_cast<std::size_t>(c)] > 1) {
        target_color = c;
        break;
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (colors[static_cast<std::size_t>(v)] != target_color) continue;
    std::vector<int> child(colors);
    for (int& c : child) c *= 2;
    child[static_cast<std::size_t>(v)] -= 1;
    canon_search(g, std::move(child), best);
  }
}

}  // namespace

MolecularGraph parse_smiles(const SmilesString& s) {
  Parser parser(s);
  parser.run();
  auto& parsed_atoms = parser.atoms();
  auto& parsed_bonds = parser.bonds();
  kekulize(parsed_atoms, parsed_bonds);

  std::vector<Atom> atoms;
  atoms.reserve(parsed_atoms.size());
  for (const ParsedAtom& a : parsed_atoms) {
    atoms.push_back({a.element, static_cast<std::int8_t>(a.charge)});
  }
  std::vector<Bond> bonds;
  bonds.reserve(parsed_bonds.size());
  for (const ParsedBond& b : parsed_bonds) {
    bonds.push_back({b.a, b.b, b.order});
  }

  // Valence check with source positions, ahead of graph construction.
  std::vector<int> order_sum(atoms.size(), 0);
  for (const Bond& b : bonds) {
    order_sum[static_cast<std::size_t>(b.a)] += b.order;
    order_sum[static_cast<std::size_t>(b.b)] += b.order;
  }
  for (std::size_t v = 0; v < atoms.size(); ++v) {
    if (order_sum[v] > max_valence(atoms[v].element)) {
      throw ParseError("valence violation on " + std::string(element_symbol(atoms[v].element)),
                       parsed_atoms[v].src_pos);
    }
  }

  try {
    return MolecularGraph(std::move(atoms), std::move(bonds));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

std::vector<int> refinement_ranks(const MolecularGraph& g) {
  std::vector<int> colors = initial_colors(g);
  refine(g, colors);
  return colors;
}

SmilesString write_canonical(const MolecularGraph& g) {
  std::string best;
  canon_search(g, initial_colors(g), best);
  return best;
}

CanonicalKey canonical_key(const MolecularGraph& g) { return write_canonical(g); }

}  // namespace molevo

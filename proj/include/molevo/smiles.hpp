#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "molevo/graph.hpp"

namespace molevo {

using SmilesString = std::string;

// Canonical SMILES of the kekulized, charge-annotated graph. Key equality
// is graph isomorphism under the supported feature set.
using CanonicalKey = std::string;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Parses the supported SMILES subset: organic-subset atoms
// {C,N,O,F,P,S,Cl,Br}, aromatic {c,n,o,s}, bonds - = #, branches,
// ring-closure digits and %nn, bracket atoms with charge and H count.
// Aromatic rings are kekulized to alternating integer orders. Rejects
// stereo markers, isotopes, wildcards and multi-fragment input.
MolecularGraph parse_smiles(const SmilesString& s);

// Deterministic, relabeling-invariant serialization; always kekulized.
SmilesString write_canonical(const MolecularGraph& g);

CanonicalKey canonical_key(const MolecularGraph& g);

// Stable iterative-refinement partition ranks (no individualization).
// Relabeling-invariant: two atoms share a rank only if no refinement round
// distinguishes their neighborhoods.
std::vector<int> refinement_ranks(const MolecularGraph& g);

}  // namespace molevo

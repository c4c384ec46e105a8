#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "molevo/fingerprint.hpp"
#include "molevo/graph.hpp"

namespace molevo {

// Environment identifiers observed in a reference corpus, per radius.
// Immutable once built; shareable across threads.
struct ReferenceRegistry {
  int max_diameter = 4;
  std::uint64_t molecule_count = 0;
  std::uint64_t skipped_count = 0;  // unparseable corpus lines
  std::uint64_t corpus_digest = 0;
  std::vector<std::vector<EcfpId>> sets;  // sets[r] sorted ascending

  int max_radius() const { return max_diameter / 2; }
  bool contains(int radius, EcfpId id) const;
  bool covers_diameter(int diameter) const { return diameter <= max_diameter; }
};

struct SillyScore {
  double value = 0.0;
  int silly_count = 0;
  int total_count = 0;
};

// Streams SMILES lines ('#' comments and blank lines ignored), inserting all
// identifiers at radii 0..max_diameter/2. Unparseable lines are counted and
// skipped. Throws std::runtime_error when nothing parses.
ReferenceRegistry build_registry(std::istream& corpus, int max_diameter);

// Fraction of the molecule's (atom, radius) identifiers over the selected
// diameters that are absent from the registry. 0 = fully covered, 1 = fully
// unknown. Throws std::invalid_argument for a diameter the registry lacks.
SillyScore silly_score(const MolecularGraph& g, const ReferenceRegistry& reg,
                       std::span<const int> diameters);

SillyScore silly_score(const FingerprintSet& fp, const ReferenceRegistry& reg,
                       std::span<const int> diameters);

// True iff no identifier is absent (silly_count == 0).
bool passes_filter(const MolecularGraph& g, const ReferenceRegistry& reg,
                   std::span<const int> diameters);

void save_registry(const ReferenceRegistry& reg, const std::filesystem::path& path);
ReferenceRegistry load_registry(const std::filesystem::path& path);

// Decimal ids, one per line, with per-radius section headers; for diffing.
void export_registry_text(const ReferenceRegistry& reg, std::ostream& out);

}  // namespace molevo

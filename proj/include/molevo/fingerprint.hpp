#pragma once

#include <cstdint>
#include <vector>

#include "molevo/graph.hpp"

namespace molevo {

using EcfpId = std::uint64_t;

// Fixed, endianness-independent 64-bit mixing function: FNV-1a over the
// little-endian 8-byte encodings of the inputs, finished with the splitmix64
// avalanche. Identifier values are part of the registry file format, so the
// constants here must never change.
class IdHasher {
 public:
  IdHasher& add(std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= (value >> (8 * i)) & 0xff;
      state_ *= 0x100000001b3ull;
    }
    return *this;
  }

  IdHasher& add_signed(std::int64_t value) { return add(static_cast<std::uint64_t>(value)); }

  EcfpId finish() const {
    std::uint64_t z = state_;
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

EcfpId hash64_bytes(const void* data, std::size_t size);

// Atom-centered environment identifiers for radii 0..diameter/2.
// ids[r] holds one identifier per atom (multiset across the molecule);
// ids[r][v] identifies the environment of atom v up to radius r.
struct FingerprintSet {
  int diameter = 0;
  std::vector<std::vector<EcfpId>> ids;

  int max_radius() const { return diameter / 2; }
  EcfpId atom_id(int v, int radius) const {
    return ids[static_cast<std::size_t>(radius)][static_cast<std::size_t>(v)];
  }
};

struct FoldedVector {
  int length = 0;
  std::vector<std::uint64_t> words;

  bool test(int bit) const {
    return (words[static_cast<std::size_t>(bit) / 64] >> (static_cast<std::size_t>(bit) % 64)) & 1;
  }
  int popcount() const;
};

// Radius-0 identifiers: hash of (atomic number, formal charge, heavy degree,
// implicit hydrogen count), one per atom.
std::vector<EcfpId> initial_invariants(const MolecularGraph& g);

// diameter must be even and >= 0. For r > 0,
//   id(v,r) = hash(r, id(v,r-1), sorted [(bond order, id(u,r-1)) for u in N(v)])
// with pairs sorted ascending by (order, id).
FingerprintSet ecfp(const MolecularGraph& g, int diameter);

// Presence bits at id mod length over every radius. length must be 1024 or
// 2048; anything else throws std::invalid_argument.
FoldedVector fold(const FingerprintSet& fp, int length);

}  // namespace molevo

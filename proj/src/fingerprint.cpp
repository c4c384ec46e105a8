#include "molevo/fingerprint.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>

namespace molevo {

EcfpId hash64_bytes(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t state = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    state ^= bytes[i];
    state *= 0x100000001b3ull;
  }
  std::uint64_t z = state;
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

int FoldedVector::popcount() const {
  int total = 0;
  for (std::uint64_t w : words) total += std::popcount(w);
  return total;
}

std::vector<EcfpId> initial_invariants(const MolecularGraph& g) {
  const int n = g.atom_count();
  std::vector<EcfpId> out(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const Atom& a = g.atom(v);
    IdHasher h;
    h.add(static_cast<std::uint64_t>(atomic_number(a.element)));
    h.add_signed(a.formal_charge);
    h.add(static_cast<std::uint64_t>(g.degree(v)));
    h.add(static_cast<std::uint64_t>(free_valence(g, v)));
    out[static_cast<std::size_t>(v)] = h.finish();
  }
  return out;
}

FingerprintSet ecfp(const MolecularGraph& g, int diameter) {
  if (diameter < 0 || diameter % 2 != 0) {
    throw std::invalid_argument("fingerprint diameter must be a non-negative even number");
  }
  const int n = g.atom_count();
  FingerprintSet fp;
  fp.diameter = diameter;
  fp.ids.push_back(initial_invariants(g));

  for (int r = 1; r <= diameter / 2; ++r) {
    const std::vector<EcfpId>& prev = fp.ids.back();
    std::vector<EcfpId> cur(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      std::array<std::pair<int, EcfpId>, 4> nb{};
      int count = 0;
      for (const auto& [u, order] : g.neighbors(v)) {
        nb[static_cast<std::size_t>(count++)] = {order, prev[static_cast<std::size_t>(u)]};
      }
      std::sort(nb.begin(), nb.begin() + count);
      IdHasher h;
      h.add(static_cast<std::uint64_t>(r));
      h.add(prev[static_cast<std::size_t>(v)]);
      for (int i = 0; i < count; ++i) {
        h.add(static_cast<std::uint64_t>(nb[static_cast<std::size_t>(i)].first));
        h.add(nb[static_cast<std::size_t>(i)].second);
      }
      cur[static_cast<std::size_t>(v)] = h.finish();
    }
    fp.ids.push_back(std::move(cur));
  }
  return fp;
}

FoldedVector fold(const FingerprintSet& fp, int length) {
  if (length != 1024 && length != 2048) {
    throw std::invalid_argument("fold length must be 1024 or 2048");
  }
  FoldedVector out;
  out.length = length;
  out.words.assign(static_cast<std::size_t>(length) / 64, 0);
  for (const auto& radius_ids : fp.ids) {
    for (EcfpId id : radius_ids) {
      const std::uint64_t bit = id % static_cast<std::uint64_t>(length);
      out.words[bit / 64] |= 1ull << (bit % 64);
    }
  }
  return out;
}

}  // namespace molevo

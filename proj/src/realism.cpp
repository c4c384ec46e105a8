#include "molevo/realism.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <stdexcept>
#include <string>

#include "molevo/smiles.hpp"

namespace molevo {

namespace {

std::string trimmed(const std::string& line) {
  const auto begin = line.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = line.find_last_not_of(" \t\r\n");
  return line.substr(begin, end - begin + 1);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

constexpr char kMagic[8] = {'M', 'L', 'V', 'O', 'R', 'E', 'G', '1'};

}  // namespace

bool ReferenceRegistry::contains(int radius, EcfpId id) const {
  const auto& set = sets[static_cast<std::size_t>(radius)];
  return std::binary_search(set.begin(), set.end(), id);
}

ReferenceRegistry build_registry(std::istream& corpus, int max_diameter) {
  if (max_diameter < 0 || max_diameter % 2 != 0 || max_diameter > 4) {
    throw std::invalid_argument("registry diameter must be 0, 2 or 4");
  }
  ReferenceRegistry reg;
  reg.max_diameter = max_diameter;
  const int radii = max_diameter / 2 + 1;
  std::vector<std::set<EcfpId>> collect(static_cast<std::size_t>(radii));

  IdHasher digest;
  std::string line;
  while (std::getline(corpus, line)) {
    digest.add(hash64_bytes(line.data(), line.size()));
    const std::string s = trimmed(line);
    if (s.empty() || s[0] == '#') continue;
    try {
      const MolecularGraph g = parse_smiles(s);
      const FingerprintSet fp = ecfp(g, max_diameter);
      for (int r = 0; r < radii; ++r) {
        for (EcfpId id : fp.ids[static_cast<std::size_t>(r)]) {
          collect[static_cast<std::size_t>(r)].insert(id);
        }
      }
      ++reg.molecule_count;
    } catch (const ParseError&) {
      ++reg.skipped_count;
    }
  }
  if (reg.molecule_count == 0) {
    throw std::runtime_error("registry build failed: no parseable molecule in corpus");
  }
  reg.corpus_digest = digest.finish();
  for (auto& set : collect) reg.sets.emplace_back(set.begin(), set.end());
  return reg;
}

SillyScore silly_score(const FingerprintSet& fp, const ReferenceRegistry& reg,
                       std::span<const int> diameters) {
  SillyScore score;
  for (int d : diameters) {
    if (d % 2 != 0 || !reg.covers_diameter(d) || d > fp.diameter) {
      throw std::invalid_argument("diameter " + std::to_string(d) + " not covered by registry");
    }
    const int r = d / 2;
    for (EcfpId id : fp.ids[static_cast<std::size_t>(r)]) {
      ++score.total_count;
      if (!reg.contains(r, id)) ++score.silly_count;
    }
  }
  if (score.total_count == 0) throw std::invalid_argument("no diameters selected");
  score.value = static_cast<double>(score.silly_count) / static_cast<double>(score.total_count);
  return score;
}

SillyScore silly_score(const MolecularGraph& g, const ReferenceRegistry& reg,
                       std::span<const int> diameters) {
  int max_d = 0;
  for (int d : diameters) max_d = std::max(max_d, d);
  return silly_score(ecfp(g, max_d), reg, diameters);
}

bool passes_filter(const MolecularGraph& g, const ReferenceRegistry& reg,
                   std::span<const int> diameters) {
  return silly_score(g, reg, diameters).silly_count == 0;
}

void save_registry(const ReferenceRegistry& reg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open registry file for writing: " + path.string());
  out.write(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(reg.max_diameter));
  put_u64(out, reg.molecule_count);
  put_u64(out, reg.skipped_count);
  put_u64(out, reg.corpus_digest);
  for (const auto& set : reg.sets) {
    put_u64(out, set.size());
    for (EcfpId id : set) put_u64(out, id);
  }
  if (!out) throw std::runtime_error("failed writing registry file: " + path.string());
}

ReferenceRegistry load_registry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open registry file: " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || !std::equal(magic, magic + 8, kMagic)) {
    throw std::runtime_error("not a registry file: " + path.string());
  }
  ReferenceRegistry reg;
  reg.max_diameter = static_cast<int>(get_u32(in));
  reg.molecule_count = get_u64(in);
  reg.skipped_count = get_u64(in);
  reg.corpus_digest = get_u64(in);
  const int radii = reg.max_diameter / 2 + 1;
  for (int r = 0; r < radii; ++r) {
    const std::uint64_t count = get_u64(in);
    std::vector<EcfpId> set(count);
    for (std::uint64_t i = 0; i < count; ++i) set[i] = get_u64(in);
    if (!std::is_sorted(set.begin(), set.end())) {
      throw std::runtime_error("corrupt registry file: unsorted id block");
    }
    reg.sets.push_back(std::move(set));
  }
  if (!in) throw std::runtime_error("truncated registry file: " + path.string());
  return reg;
}

void export_registry_text(const ReferenceRegistry& reg, std::ostream& out) {
  out << "# registry max_diameter=" << reg.max_diameter << " molecules=" << reg.molecule_count
      << " digest=" << reg.corpus_digest << "\n";
  for (std::size_t r = 0; r < reg.sets.size(); ++r) {
    out << "# radius " << r << " (" << reg.sets[r].size() << " ids)\n";
    for (EcfpId id : reg.sets[r]) out << id << "\n";
  }
}

}  // namespace molevo

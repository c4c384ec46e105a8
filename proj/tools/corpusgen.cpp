// Generates the shipped sample corpus: seeded random structure walks from a
// hand-written set of drug-like molecules, filtered by simple structural
// plausibility rules. The output is deterministic for a given seed.
//
//   corpusgen --out data/sample_corpus.smi [--count 10000] [--seed 20250808]

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "molevo/graph.hpp"
#include "molevo/rng.hpp"
#include "molevo/smiles.hpp"

using namespace molevo;

namespace {

// Small drug-like seed set: common scaffolds, rings, and functional groups
// over C/N/O/F plus a few S/Cl/Br examples. Everything here must parse and
// satisfy the plausibility rules below.
const char* kSeeds[] = {
    // analgesics and familiar drugs
    "CC(=O)Oc1ccccc1C(=O)O",
    "CC(=O)Nc1ccc(O)cc1",
    "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
    "COc1ccc2cc(ccc2c1)C(C)C(=O)O",
    "CN1C=NC2=C1C(=O)N(C)C(=O)N2C",
    "CCN(CC)CC(=O)Nc1c(C)cccc1C",
    "CN1CCCC1c1cccnc1",
    "OC(=O)c1ccccc1O",
    "COC(=O)c1ccccc1O",
    "CCOC(=O)c1ccc(N)cc1",
    "CCOc1ccc(NC(C)=O)cc1",
    "COc1cc(C=O)ccc1O",
    "C=CCc1ccc(O)c(OC)c1",
    "Cc1ccc(C(C)C)c(O)c1",
    "CC(C)C1CCC(C)CC1O",
    "CC(C(=O)O)c1cccc(c1)C(=O)c1ccccc1",
    "CN(C)CCOC(c1ccccc1)c1ccccc1",
    "CCN(CC)CCOC(=O)c1ccc(N)cc1",
    "CC(C)NCC(O)COc1cccc2ccccc12",
    "CC(C)NCC(O)COc1ccc(CC(N)=O)cc1",
    "CNCCC(Oc1ccc(cc1)C(F)(F)F)c1ccccc1",
    "CC(N)COc1c(C)cccc1C",
    "CNC(C)C(O)c1ccccc1",
    "CC(N)Cc1ccccc1",
    "COc1ccc2[nH]cc(CCNC(C)=O)c2c1",
    "NCCc1c[nH]c2ccc(O)cc12",
    "NCCc1c[nH]c2ccccc12",
    "NCCc1cnc[nH]1",
    "NCCc1ccc(O)c(O)c1",
    "NCCc1ccc(O)cc1",
    "Nc1ncnc2[nH]cnc12",
    "O=C1NC(=O)C(c2ccccc2)(c2ccccc2)N1",
    "O=C1C=Cc2ccccc2O1",
    // simple aromatics
    "c1ccccc1",
    "Cc1ccccc1",
    "CCc1ccccc1",
    "Oc1ccccc1",
    "Nc1ccccc1",
    "COc1ccccc1",
    "OC(=O)c1ccccc1",
    "NC(=O)c1ccccc1",
    "N#Cc1ccccc1",
    "Fc1ccccc1",
    "Clc1ccccc1",
    "Brc1ccccc1",
    "C=Cc1ccccc1",
    "CC(=O)c1ccccc1",
    "O=Cc1ccccc1",
    "OCc1ccccc1",
    "NCc1ccccc1",
    "CC(=O)Nc1ccccc1",
    "CSc1ccccc1",
    "Clc1ccc(Cl)cc1",
    "Nc1ccc(F)cc1",
    "Nc1ccc(cc1)C(=O)O",
    "Cc1ccc(C)cc1",
    "Cc1cccc(C)c1",
    "COc1ccc(C=CC)cc1",
    "OC(=O)C=Cc1ccccc1",
    "CC(=O)OCc1ccccc1",
    "COC(=O)c1ccccc1",
    // heteroaromatics
    "c1ccncc1",
    "c1cncnc1",
    "c1cnccn1",
    "c1ccoc1",
    "c1ccsc1",
    "c1cc[nH]c1",
    "c1cnc[nH]1",
    "c1cocn1",
    "c1cscn1",
    "Cc1ccncc1",
    "Nc1ccncc1",
    "NC(=O)c1cccnc1",
    "c1ccc2ccccc2c1",
    "c1ccc2ncccc2c1",
    "c1ccc2c(c1)cc[nH]2",
    "c1ccc2occc2c1",
    "c1ccc2sccc2c1",
    "O=Cc1ccco1",
    // saturated rings
    "C1CCCCC1",
    "C1CCCC1",
    "C1CCOC1",
    "C1CCOCC1",
    "C1CCNC1",
    "C1CCNCC1",
    "C1CNCCN1",
    "C1COCCN1",
    "O=C1CCCCC1",
    "OC1CCCCC1",
    "NC1CCCCC1",
    "CC1CCCCC1",
    "CC1(C)C2CCC1(C)C(=O)C2",
    // chains and functional groups
    "CCO",
    "CCN",
    "CCOCC",
    "CC(C)O",
    "CC(=O)O",
    "CC(N)=O",
    "CC(C)=O",
    "CCOC(C)=O",
    "CCCCCC",
    "CC(C)C",
    "CC(C)(C)C",
    "C=CC=C",
    "CC#N",
    "CC#C",
    "CSC",
    "CS",
    "CCCl",
    "CCBr",
    "CC(F)(F)F",
    "FC(F)c1ccccc1",
    "C=CCO",
    "C#CCO",
    "NCC(=O)O",
    "CC(N)C(=O)O",
    "NC(Cc1ccccc1)C(=O)O",
    "OC(=O)CCC(=O)O",
    "OC(=O)CC(O)(CC(=O)O)C(=O)O",
    "NC(N)=O",
    "CNC(=O)NC",
    "CNC(=O)OC",
    "CCOC(=O)CC(=O)OCC",
    "CC(=O)CC(C)=O",
    "CC=CC=O",
    "CC(=O)CC(c1ccccc1)c1c(O)c2ccccc2oc1=O",
};

bool is_carbon(const MolecularGraph& g, int v) { return g.atom(v).element == Element::C; }

// Structural plausibility rules for corpus growth. These are deliberately
// simple and neighbor-sensitive; they define what "realistic" means for the
// shipped desk-scale corpus.
bool plausible(const MolecularGraph& g) {
  const int n = g.atom_count();

  // no bonds between two heteroatoms
  for (const Bond& b : g.bonds()) {
    if (!is_carbon(g, b.a) && !is_carbon(g, b.b)) return false;
  }

  for (int v = 0; v < n; ++v) {
    const Element e = g.atom(v).element;
    int het = 0;
    int fluor = 0;
    int max_order = 0;
    int multi = 0;
    int triple = 0;
    for (const auto& [u, order] : g.neighbors(v)) {
      if (!is_carbon(g, u)) ++het;
      if (g.atom(u).element == Element::F) ++fluor;
      max_order = std::max(max_order, order);
      if (order >= 2) ++multi;
      if (order == 3) ++triple;
    }

    // fluorine sits on carbons that carry no other heteroatom
    if (e == Element::F) {
      const int c = g.neighbors(v)[0].first;
      if (!is_carbon(g, c)) return false;
      int other_het = 0;
      for (const auto& [u, order] : g.neighbors(c)) {
        (void)order;
        if (!is_carbon(g, u) && g.atom(u).element != Element::F) ++other_het;
      }
      if (other_het > 0) return false;
    }

    if (e == Element::C) {
      // several heteroatom neighbors only around a multiple bond (esters,
      // amides, amidines, ring-fusion carbons), or an all-fluorine set
      if (het >= 4) return false;
      if (het >= 2 && max_order < 2 && fluor != het) return false;
    }

    // no cumulated double bonds
    if (multi - triple >= 2) return false;

    // triple bonds: nitriles and alkynes only, on low-substituted atoms
    if (triple > 0) {
      if (e != Element::C && e != Element::N) return false;
      if (g.degree(v) > 2) return false;
    }
  }

  // no 3- or 4-membered rings: for every bond, the endpoints must not be
  // connected by another path of length <= 3
  for (const Bond& b : g.bonds()) {
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::vector<int> frontier{b.a};
    dist[static_cast<std::size_t>(b.a)] = 0;
    for (int depth = 0; depth < 3 && !frontier.empty(); ++depth) {
      std::vector<int> next;
      for (int x : frontier) {
        for (const auto& [u, order] : g.neighbors(x)) {
          (void)order;
          if (x == b.a && u == b.b) continue;
          if (dist[static_cast<std::size_t>(u)] >= 0) continue;
          dist[static_cast<std::size_t>(u)] = depth + 1;
          next.push_back(u);
        }
      }
      frontier = std::move(next);
    }
    if (dist[static_cast<std::size_t>(b.b)] >= 0) return false;
  }

  // ring budget
  const int cyclomatic = static_cast<int>(g.bonds().size()) - n + 1;
  if (cyclomatic > 4) return false;

  return true;
}

double mutation_weight(const MolecularGraph& g, const Mutation& m,
                       std::span<const Element> candidates) {
  switch (m.kind) {
    case MutationKind::AddA:
      switch (candidates[static_cast<std::size_t>(m.option)]) {
        case Element::C: return 1.0;
        case Element::N: return 0.30;
        case Element::O: return 0.30;
        case Element::F: return 0.06;
        default: return 0.0;
      }
    case MutationKind::RmA:
      return 0.20;
    case MutationKind::ChB: {
      const int current = g.bond_order_between(m.position, m.partner);
      if (current == 0) return 0.04;  // ring closure
      return 0.12;
    }
  }
  return 0.0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sample corpus generator"};
  std::string out_path = "data/sample_corpus.smi";
  int target = 10000;
  std::uint64_t seed = 20250808;
  int max_heavy = 38;
  app.add_option("--out", out_path, "output corpus file");
  app.add_option("--count", target, "number of molecules to generate");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--max-heavy", max_heavy, "heavy atom cap");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Element> candidates = {Element::C, Element::N, Element::O, Element::F};
  const ActionMask actions;  // AddA, RmA, ChB; no bond deletion

  std::vector<MolecularGraph> pool;
  std::vector<std::string> keys_ordered;
  std::unordered_set<std::string> seen;

  int seed_failures = 0;
  for (const char* s : kSeeds) {
    try {
      MolecularGraph g = parse_smiles(s);
      if (!plausible(g)) {
        std::cerr << "seed rejected by plausibility rules: " << s << "\n";
        ++seed_failures;
        continue;
      }
      std::string key = canonical_key(g);
      if (seen.insert(key).second) {
        pool.push_back(std::move(g));
        keys_ordered.push_back(std::move(key));
      }
    } catch (const ParseError& e) {
      std::cerr << "seed failed to parse: " << s << " -- " << e.what() << "\n";
      ++seed_failures;
    }
  }
  if (seed_failures > 0) {
    std::cerr << seed_failures << " seed(s) rejected; fix the seed list\n";
    return 2;
  }
  std::cerr << "seeds: " << pool.size() << "\n";

  Rng rng(seed);
  std::size_t walk_steps = 0;
  const std::size_t max_walk_steps = 4'000'000;

  while (static_cast<int>(keys_ordered.size()) < target && walk_steps < max_walk_steps) {
    MolecularGraph current = pool[rng.next_index(pool.size())];
    const int walk_len = 1 + static_cast<int>(rng.next_index(8));
    for (int hop = 0; hop < walk_len; ++hop) {
      ++walk_steps;
      const auto valid = enumerate_valid_mutations(current, actions, candidates, max_heavy);
      if (valid.empty()) break;

      std::vector<double> w(valid.size());
      double total = 0.0;
      for (std::size_t i = 0; i < valid.size(); ++i) {
        w[i] = mutation_weight(current, valid[i], candidates);
        total += w[i];
      }

      bool moved = false;
      for (int attempt = 0; attempt < 40 && !moved; ++attempt) {
        double roll = rng.next_double() * total;
        std::size_t pick = valid.size() - 1;
        for (std::size_t i = 0; i < w.size(); ++i) {
          roll -= w[i];
          if (roll < 0) {
            pick = i;
            break;
          }
        }
        MolecularGraph next = apply_mutation(current, valid[pick], candidates);
        if (!plausible(next)) continue;
        current = std::move(next);
        moved = true;
      }
      if (!moved) break;

      if (current.atom_count() >= 5) {
        std::string key = canonical_key(current);
        if (seen.insert(key).second) {
          pool.push_back(current);
          keys_ordered.push_back(std::move(key));
          if (static_cast<int>(keys_ordered.size()) >= target) break;
        }
      }
    }
  }

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot open " << out_path << "\n";
    return 2;
  }
  out << "# sample corpus: seeded structure walks, seed=" << seed
      << " count=" << keys_ordered.size() << "\n";
  for (const std::string& key : keys_ordered) out << key << "\n";
  std::cerr << "wrote " << keys_ordered.size() << " molecules to " << out_path << " ("
            << walk_steps << " walk steps)\n";
  return 0;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "molevo/fingerprint.hpp"
#include "molevo/graph.hpp"
#include "molevo/smiles.hpp"
#include "test_util.hpp"

using namespace molevo;

namespace {

const std::vector<Element> kCnof = {Element::C, Element::N, Element::O, Element::F};
const char* kAspirin = "CC(=O)Oc1ccccc1C(=O)O";

MolecularGraph lone_carbon() { return MolecularGraph({{Element::C, 0}}, {}); }

}  // namespace

TEST_CASE("element table") {
  CHECK(max_valence(Element::C) == 4);
  CHECK(max_valence(Element::N) == 3);
  CHECK(max_valence(Element::O) == 2);
  CHECK(max_valence(Element::F) == 1);
  CHECK(max_valence(Element::P) == 3);
  CHECK(max_valence(Element::S) == 2);
  CHECK(max_valence(Element::Cl) == 1);
  CHECK(max_valence(Element::Br) == 1);
  CHECK(element_from_symbol("Cl") == Element::Cl);
  CHECK(!element_from_symbol("Xx").has_value());
}

TEST_CASE("free_valence basics") {
  CHECK(free_valence(lone_carbon(), 0) == 4);

  const MolecularGraph cf({{Element::C, 0}, {Element::F, 0}}, {{0, 1, 1}});
  CHECK(free_valence(cf, 1) == 0);
  CHECK(free_valence(cf, 0) == 3);

  CHECK_THROWS_AS((void)free_valence(cf, 7), std::out_of_range);
}

TEST_CASE("free_valence on the aspirin carbonyl carbon") {
  const MolecularGraph g = parse_smiles(kAspirin);
  // independent oracle: sum incident orders straight off the bond list
  auto order_sum = [&](int v) {
    int sum = 0;
    for (const Bond& b : g.bonds()) {
      if (b.a == v || b.b == v) sum += b.order;
    }
    return sum;
  };
  // atom 1 is the acetyl carbonyl carbon in this SMILES ordering
  CHECK(g.atom(1).element == Element::C);
  CHECK(order_sum(1) == 4);
  CHECK(free_valence(g, 1) == 4 - order_sum(1));
  CHECK(free_valence(g, 1) == 0);
}

TEST_CASE("graph invariants enforced at construction") {
  CHECK_THROWS_AS(MolecularGraph({}, {}), std::invalid_argument);
  // valence overflow
  CHECK_THROWS_AS(MolecularGraph({{Element::O, 0}, {Element::C, 0}}, {{0, 1, 3}}),
                  std::invalid_argument);
  // disconnected
  CHECK_THROWS_AS(MolecularGraph({{Element::C, 0}, {Element::C, 0}}, {}),
                  std::invalid_argument);
  // self loop and duplicate bond
  CHECK_THROWS_AS(MolecularGraph({{Element::C, 0}}, {{0, 0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(
      MolecularGraph({{Element::C, 0}, {Element::C, 0}}, {{0, 1, 1}, {1, 0, 1}}),
      std::invalid_argument);
}

TEST_CASE("is_connected") {
  CHECK(is_connected(parse_smiles("c1ccccc1")));
  CHECK(is_connected(parse_smiles("CC")));
}

TEST_CASE("AddA validity follows free valence and the heavy-atom cap") {
  const MolecularGraph g = parse_smiles(kAspirin);
  const auto muts = enumerate_valid_mutations(g, {true, false, false, false}, kCnof, 38);
  for (int v = 0; v < g.atom_count(); ++v) {
    const bool any_at_v = std::any_of(muts.begin(), muts.end(), [&](const Mutation& m) {
      return m.position == v;
    });
    CHECK(any_at_v == (free_valence(g, v) >= 1));
  }
  // saturated carbons admit no AddA
  CHECK(free_valence(g, 1) == 0);

  // cap reached: no additions at all
  CHECK(enumerate_valid_mutations(g, {true, false, false, false}, kCnof, g.atom_count()).empty());
}

TEST_CASE("aspirin AddA sites span exactly 12 distinct radius-0 contexts") {
  const MolecularGraph g = parse_smiles(kAspirin);
  const auto muts = enumerate_valid_mutations(g, {true, false, false, false}, kCnof, 38);
  const auto ids = initial_invariants(g);
  std::set<std::pair<EcfpId, int>> contexts;
  for (const Mutation& m : muts) {
    contexts.insert({ids[static_cast<std::size_t>(m.position)], m.option});
  }
  CHECK(contexts.size() == 12);
}

TEST_CASE("RmA validity avoids cleavage") {
  const MolecularGraph g = parse_smiles(kAspirin);
  const auto muts = enumerate_valid_mutations(g, {false, true, false, false}, kCnof, 38);
  std::set<int> removable;
  for (const Mutation& m : muts) removable.insert(m.position);

  // the ester oxygen (two neighbors, both on the backbone) is an articulation
  // point; removing it would cleave the molecule
  CHECK(g.atom(3).element == Element::O);
  CHECK(g.degree(3) == 2);
  CHECK(!removable.contains(3));

  // leaves are always removable on a multi-atom molecule
  for (int v = 0; v < g.atom_count(); ++v) {
    if (g.degree(v) == 1) CHECK(removable.contains(v));
  }

  // lone atom: removal would empty the molecule
  CHECK(enumerate_valid_mutations(lone_carbon(), {false, true, false, false}, kCnof, 38).empty());
}

TEST_CASE("ring atoms without substituents are removable, substituted ones are not") {
  const MolecularGraph g = parse_smiles("Cc1ccccc1");  // toluene
  const auto muts = enumerate_valid_mutations(g, {false, true, false, false}, kCnof, 38);
  std::set<int> removable;
  for (const Mutation& m : muts) removable.insert(m.position);
  CHECK(removable.contains(0));   // methyl leaf
  CHECK(!removable.contains(1));  // ipso carbon anchors the methyl
  for (int v = 2; v <= 6; ++v) CHECK(removable.contains(v));
}

TEST_CASE("apply AddA") {
  // lone carbon -> ethane skeleton
  const MolecularGraph ethane =
      apply_mutation(lone_carbon(), {MutationKind::AddA, 0, 0, -1}, kCnof);
  CHECK(ethane.atom_count() == 2);
  CHECK(ethane.bonds().size() == 1);
  CHECK(ethane.bonds()[0].order == 1);

  // adding N to the hydroxyl oxygen of aspirin: 14 atoms, one nitrogen, and
  // that oxygen then saturates so no further additions there
  const MolecularGraph g = parse_smiles(kAspirin);
  const int hydroxyl = 12;
  CHECK(g.atom(hydroxyl).element == Element::O);
  CHECK(free_valence(g, hydroxyl) == 1);
  const MolecularGraph mutated =
      apply_mutation(g, {MutationKind::AddA, hydroxyl, 1, -1}, kCnof);
  CHECK(mutated.atom_count() == 14);
  int nitrogens = 0;
  for (int v = 0; v < mutated.atom_count(); ++v) {
    if (mutated.atom(v).element == Element::N) ++nitrogens;
  }
  CHECK(nitrogens == 1);
  const auto follow_up =
      enumerate_valid_mutations(mutated, {true, false, false, false}, kCnof, 38);
  CHECK(std::none_of(follow_up.begin(), follow_up.end(),
                     [&](const Mutation& m) { return m.position == hydroxyl; }));
}

TEST_CASE("apply ChB bookkeeping") {
  const MolecularGraph ethane = parse_smiles("CC");
  CHECK(free_valence(ethane, 0) == 3);
  const MolecularGraph ethene = apply_mutation(ethane, {MutationKind::ChB, 0, 2, 1}, kCnof);
  CHECK(ethene.atom_count() == 2);
  CHECK(ethene.bond_order_between(0, 1) == 2);
  CHECK(free_valence(ethene, 0) == free_valence(ethane, 0) - 1);
  CHECK(free_valence(ethene, 1) == free_valence(ethane, 1) - 1);
}

TEST_CASE("apply RmA compacts indices by downward shift") {
  const MolecularGraph g = parse_smiles("CCO");
  const MolecularGraph h = apply_mutation(g, {MutationKind::RmA, 0, -1, -1}, kCnof);
  CHECK(h.atom_count() == 2);
  CHECK(h.atom(0).element == Element::C);
  CHECK(h.atom(1).element == Element::O);
  CHECK(h.bond_order_between(0, 1) == 1);
}

TEST_CASE("invalid mutations are rejected by apply") {
  const MolecularGraph g = parse_smiles(kAspirin);
  CHECK_THROWS_AS(apply_mutation(g, {MutationKind::AddA, 1, 0, -1}, kCnof),
                  std::invalid_argument);  // saturated carbon
  CHECK_THROWS_AS(apply_mutation(g, {MutationKind::RmA, 3, -1, -1}, kCnof),
                  std::invalid_argument);  // cleavage
  CHECK_THROWS_AS(apply_mutation(parse_smiles("CC"), {MutationKind::ChB, 0, 1, 1}, kCnof),
                  std::invalid_argument);  // target equals current order
}

TEST_CASE("bond deletion stays off by default and is cycle-safe when enabled") {
  const MolecularGraph ring = parse_smiles("C1CCCCC1");
  const auto base = enumerate_valid_mutations(ring, {false, false, true, false}, kCnof, 38);
  CHECK(std::none_of(base.begin(), base.end(),
                     [](const Mutation& m) { return m.option == 0; }));

  const auto with_delete = enumerate_valid_mutations(ring, {false, false, true, true}, kCnof, 38);
  int deletions = 0;
  for (const Mutation& m : with_delete) {
    if (m.option != 0) continue;
    ++deletions;
    const MolecularGraph opened = apply_mutation(ring, m, kCnof);
    CHECK(is_connected(opened));
    CHECK(opened.atom_count() == 6);
  }
  CHECK(deletions == 6);  // every ring bond, and only ring bonds

  const MolecularGraph chain = parse_smiles("CCC");
  const auto chain_muts = enumerate_valid_mutations(chain, {false, false, true, true}, kCnof, 38);
  CHECK(std::none_of(chain_muts.begin(), chain_muts.end(),
                     [](const Mutation& m) { return m.option == 0; }));
}

TEST_CASE("enumeration is deterministic and ordered") {
  const MolecularGraph g = parse_smiles(kAspirin);
  const ActionMask all;
  const auto a = enumerate_valid_mutations(g, all, kCnof, 38);
  const auto b = enumerate_valid_mutations(g, all, kCnof, 38);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  for (std::size_t i = 1; i < a.size(); ++i) {
    const auto key = [](const Mutation& m) {
      return std::tuple(m.kind, m.position, m.partner, m.option);
    };
    CHECK(key(a[i - 1]) < key(a[i]));
  }
}

TEST_CASE("AddA then RmA of the new atom round-trips") {
  Rng rng(7);
  MolecularGraph g = parse_smiles("CCO");
  for (int iter = 0; iter < 50; ++iter) {
    const auto adds = enumerate_valid_mutations(g, {true, false, false, false}, kCnof, 38);
    if (adds.empty()) break;
    const Mutation add = adds[rng.next_index(adds.size())];
    const MolecularGraph grown = apply_mutation(g, add, kCnof);
    const int new_atom = grown.atom_count() - 1;
    const auto removals =
        enumerate_valid_mutations(grown, {false, true, false, false}, kCnof, 38);
    CHECK(std::any_of(removals.begin(), removals.end(),
                      [&](const Mutation& m) { return m.position == new_atom; }));
    const MolecularGraph back = apply_mutation(grown, {MutationKind::RmA, new_atom, -1, -1}, kCnof);
    CHECK(canonical_key(back) == canonical_key(g));
    g = grown;
  }
}

TEST_CASE("random mutation chains preserve all invariants") {
  Rng rng(42);
  const ActionMask all;
  MolecularGraph g = parse_smiles(kAspirin);
  int applied = 0;
  while (applied < 3000) {
    const auto muts = enumerate_valid_mutations(g, all, kCnof, 38);
    REQUIRE(!muts.empty());
    const Mutation m = muts[rng.next_index(muts.size())];
    const MolecularGraph next = apply_mutation(g, m, kCnof);
    ++applied;

    REQUIRE(next.atom_count() >= 1);
    REQUIRE(is_connected(next));
    for (int v = 0; v < next.atom_count(); ++v) REQUIRE(free_valence(next, v) >= 0);
    const int delta = next.atom_count() - g.atom_count();
    if (m.kind == MutationKind::AddA) REQUIRE(delta == 1);
    if (m.kind == MutationKind::RmA) REQUIRE(delta == -1);
    if (m.kind == MutationKind::ChB) REQUIRE(delta == 0);
    g = next;
  }
}

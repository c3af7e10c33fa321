#include "doctest.h"
#include "emitforge/graph.hpp"
#include "emitforge/tableau.hpp"

using namespace emitforge;

namespace {

GraphState random_graph(int n, Prng& rng) {
  GraphState g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_bit()) g.add_edge(u, v);
  return g;
}

}  // namespace

TEST_CASE("graph-state tableaux have the textbook generators") {
  GraphState one(1);
  CHECK(Tableau::from_graph(one).dump() == "+X\n");

  GraphState edge(2);
  edge.add_edge(0, 1);
  CHECK(Tableau::from_graph(edge).dump() == "+XZ\n+ZX\n");

  GraphState tri(3);
  tri.add_edge(0, 1);
  tri.add_edge(0, 2);
  tri.add_edge(1, 2);
  CHECK(Tableau::from_graph(tri).dump() == "+XZZ\n+ZXZ\n+ZZX\n");
}

TEST_CASE("clifford conjugations on small tableaux") {
  Tableau t(1);
  t.apply_h(0);           // |0> -> |+>
  CHECK(t.dump() == "+X\n");
  t.apply_h(0);
  CHECK(t.dump() == "+Z\n");

  Tableau two(2);
  two.apply_h(0);
  two.apply_h(1);          // {X., .X}
  Tableau cnot = two;
  cnot.apply_cnot(0, 1);   // {XX, .X}
  CHECK(cnot.dump() == "+XX\n+IX\n");

  Tableau cz = two;
  cz.apply_cz(0, 1);
  CHECK(cz.dump() == "+XZ\n+ZX\n");
}

TEST_CASE("tableau construction matches a replayed CZ circuit") {
  Prng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + (int)rng.below(10);
    GraphState g = random_graph(n, rng);
    Tableau direct = Tableau::from_graph(g);
    Tableau built(n);
    for (int q = 0; q < n; ++q) built.apply_h(q);
    for (auto& [u, v] : g.edges()) built.apply_cz(u, v);
    CHECK(Tableau::states_equal(direct, built));
    CHECK(built.well_formed());
  }
}

TEST_CASE("states_equal is group equality, not row equality") {
  GraphState edge(2);
  edge.add_edge(0, 1);
  Tableau a = Tableau::from_graph(edge);
  // Same state built in a different generator order.
  Tableau b(2);
  b.apply_h(1);
  b.apply_cnot(1, 0);  // Bell
  b.apply_h(0);
  CHECK(Tableau::states_equal(a, b));

  Tableau x(1), z(1);
  x.apply_h(0);
  CHECK(!Tableau::states_equal(x, z));
  CHECK(Tableau::states_equal(x, x));
}

TEST_CASE("phases matter in states_equal") {
  Tableau plus(1), minus(1);
  plus.apply_h(0);
  minus.apply_h(0);
  minus.apply_z(0);  // |->
  CHECK(!Tableau::states_equal(plus, minus));
}

TEST_CASE("measure_z on stabilizer eigenstates") {
  Prng rng(22);
  Tableau z(1);
  auto m = z.measure_z(0, std::nullopt, rng);
  CHECK(m.deterministic);
  CHECK(m.outcome == 0);

  Tableau x(1);
  x.apply_h(0);
  auto mx = x.measure_z(0, 1, rng);
  CHECK(!mx.deterministic);
  CHECK(mx.outcome == 1);
  CHECK(x.dump() == "-Z\n");
}

TEST_CASE("bell pair measurement collapses the partner") {
  Prng rng(23);
  for (int forced = 0; forced < 2; ++forced) {
    Tableau t(2);
    t.apply_h(0);
    t.apply_cnot(0, 1);
    auto m = t.measure_z(0, forced, rng);
    CHECK(!m.deterministic);
    CHECK(m.outcome == forced);
    auto m2 = t.measure_z(1, std::nullopt, rng);
    CHECK(m2.deterministic);
    CHECK(m2.outcome == forced);
  }
}

TEST_CASE("trace out removes a verified |0> qubit") {
  Tableau t(3);
  t.apply_h(0);
  t.apply_cz(0, 2);  // edge between 0 and 2, qubit 1 idle in |0>
  t.apply_h(2);
  CHECK(t.stabilizes_plus_z(1));
  Tableau reduced = t.trace_out_zero_qubit(1);
  CHECK(reduced.num_qubits() == 2);
  GraphState edge(2);
  edge.add_edge(0, 1);
  Tableau expect(2);
  expect.apply_h(0);
  expect.apply_cz(0, 1);
  expect.apply_h(1);
  CHECK(Tableau::states_equal(reduced, expect));

  Tableau ent(2);
  ent.apply_h(0);
  ent.apply_cnot(0, 1);
  CHECK(!ent.stabilizes_plus_z(0));
  CHECK_THROWS(ent.trace_out_zero_qubit(0));
}

TEST_CASE("extract_graph round trips bare graph states") {
  Prng rng(24);
  for (int trial = 0; trial < 80; ++trial) {
    int n = 1 + (int)rng.below(8);
    GraphState g = random_graph(n, rng);
    Tableau t = Tableau::from_graph(g);
    auto [g2, local] = t.extract_graph();
    CHECK(g2.adjacency_equal(g));
    for (auto c : local) CHECK(c == Clifford1::I());
  }
}

TEST_CASE("extract_graph recovers dressed states up to the returned frame") {
  Prng rng(25);
  for (int trial = 0; trial < 120; ++trial) {
    int n = 1 + (int)rng.below(7);
    GraphState g = random_graph(n, rng);
    for (int v = 0; v < n; ++v)
      g.set_tag(v, Clifford1((std::uint8_t)rng.below(24)));
    Tableau t = Tableau::from_graph(g);
    auto [g2, local] = t.extract_graph();
    GraphState dressed = g2;
    for (int v = 0; v < n; ++v) dressed.set_tag(v, local[v]);
    CHECK(Tableau::states_equal(Tableau::from_graph(dressed), t));
  }
}

TEST_CASE("GHZ extracts to a star with Hadamard leaves") {
  // |GHZ_3> = (|000> + |111>)/sqrt(2)
  Tableau t(3);
  t.apply_h(0);
  t.apply_cnot(0, 1);
  t.apply_cnot(0, 2);
  auto [g, local] = t.extract_graph();
  GraphState dressed = g;
  for (int v = 0; v < 3; ++v) dressed.set_tag(v, local[v]);
  CHECK(Tableau::states_equal(Tableau::from_graph(dressed), t));
  CHECK(g.edge_count() == 2);
  int hub = -1;
  for (int v = 0; v < 3; ++v)
    if (g.degree(v) == 2) hub = v;
  CHECK(hub >= 0);
}

TEST_CASE("|0> extracts to an empty graph with an H-type frame") {
  Tableau t(1);
  auto [g, local] = t.extract_graph();
  CHECK(g.edge_count() == 0);
  CHECK(local[0] == Clifford1::H());
}

TEST_CASE("apply_clifford1 agrees with dedicated gate updates") {
  Prng rng(26);
  for (int trial = 0; trial < 60; ++trial) {
    GraphState g = random_graph(4, rng);
    Tableau a = Tableau::from_graph(g);
    Tableau b = a;
    a.apply_h(2);
    b.apply_clifford1(Clifford1::H(), 2);
    CHECK(Tableau::states_equal(a, b));
    a.apply_s(1);
    b.apply_clifford1(Clifford1::S(), 1);
    CHECK(Tableau::states_equal(a, b));
  }
}

TEST_CASE("random gate sequences keep the tableau well formed") {
  Prng rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + (int)rng.below(6);
    Tableau t(n);
    for (int step = 0; step < 30; ++step) {
      switch (rng.below(4)) {
        case 0: t.apply_clifford1(Clifford1((std::uint8_t)rng.below(24)),
                                  (int)rng.below(n)); break;
        case 1: {
          int a = (int)rng.below(n), b = (int)rng.below(n);
          if (a != b) t.apply_cnot(a, b);
          break;
        }
        case 2: {
          int a = (int)rng.below(n), b = (int)rng.below(n);
          if (a != b) t.apply_cz(a, b);
          break;
        }
        default: {
          auto m = t.measure_z((int)rng.below(n), std::nullopt, rng);
          (void)m;
          break;
        }
      }
      REQUIRE(t.well_formed());
    }
  }
}

#include <algorithm>

#include "doctest.h"
#include "emitforge/graph.hpp"
#include "emitforge/tableau.hpp"

using namespace emitforge;

namespace {

GraphState triangle() {
  GraphState g(3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  return g;
}

GraphState path(int n) {
  GraphState g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

GraphState random_graph(int n, Prng& rng, int density_pct = 50) {
  GraphState g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.below(100) < (std::uint64_t)density_pct) g.add_edge(u, v);
  return g;
}

}  // namespace

TEST_CASE("neighborhood basics") {
  GraphState t = triangle();
  CHECK(t.neighborhood(0) == std::vector<int>{1, 2});
  GraphState lone(1);
  CHECK(lone.neighborhood(0).empty());
  GraphState p = path(3);
  CHECK(p.neighborhood(1) == std::vector<int>{0, 2});
  CHECK_THROWS(p.neighborhood(7));
}

TEST_CASE("local complementation toggles the neighborhood") {
  GraphState t = triangle();
  t.apply_local_complementation(0);
  CHECK(t.has_edge(0, 1));
  CHECK(t.has_edge(0, 2));
  CHECK(!t.has_edge(1, 2));

  // Fig-5-style: N(1) = {0,2,3}; all three pairs toggle.
  GraphState g(4);
  g.add_edge(1, 0);
  g.add_edge(1, 2);
  g.add_edge(1, 3);
  g.add_edge(0, 2);
  g.apply_local_complementation(1);
  CHECK(!g.has_edge(0, 2));
  CHECK(g.has_edge(0, 3));
  CHECK(g.has_edge(2, 3));
}

TEST_CASE("LC is an involution on the adjacency") {
  Prng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + (int)rng.below(9);
    GraphState g = random_graph(n, rng);
    GraphState before = g;
    int v = (int)rng.below(n);
    g.apply_local_complementation(v);
    g.apply_local_complementation(v);
    CHECK(g.adjacency_equal(before));
  }
}

TEST_CASE("LC touches no degrees outside the closed neighborhood") {
  Prng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + (int)rng.below(8);
    GraphState g = random_graph(n, rng);
    int v = (int)rng.below(n);
    std::vector<int> before;
    for (int u = 0; u < n; ++u) before.push_back(g.degree(u));
    auto nv = g.neighborhood(v);
    g.apply_local_complementation(v);
    for (int u = 0; u < n; ++u) {
      bool inside = u == v ||
                    std::find(nv.begin(), nv.end(), u) != nv.end();
      if (!inside) CHECK(g.degree(u) == before[u]);
    }
    CHECK(g.degree(v) == before[v]);
  }
}

TEST_CASE("LC rewrites preserve the represented state") {
  Prng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + (int)rng.below(7);
    GraphState g = random_graph(n, rng);
    Tableau before = Tableau::from_graph(g);
    int v = (int)rng.below(n);
    g.apply_local_complementation(v);
    Tableau after = Tableau::from_graph(g);
    CHECK(Tableau::states_equal(before, after));
  }
}

TEST_CASE("pivot swaps the endpoint neighborhoods") {
  GraphState g = path(4);  // 0-1-2-3
  GraphState before = g;
  Tableau tb = Tableau::from_graph(g);
  g.pivot(1, 2);
  CHECK(g.has_edge(1, 2));
  // 1 takes 2's outside neighborhood and vice versa.
  CHECK(g.has_edge(1, 3));
  CHECK(g.has_edge(2, 0));
  CHECK(!g.has_edge(0, 1));
  CHECK(!g.has_edge(2, 3));
  CHECK(Tableau::states_equal(tb, Tableau::from_graph(g)));
}

TEST_CASE("cnot rewrite matches the oracle") {
  Prng rng(14);
  for (int trial = 0; trial < 500; ++trial) {
    int n = 2 + (int)rng.below(7);
    GraphState g = random_graph(n, rng);
    int c = (int)rng.below(n);
    int t = (int)rng.below(n);
    if (c == t) continue;
    Tableau tb = Tableau::from_graph(g);
    tb.apply_cnot(c, t);
    g.apply_cnot_rewrite(c, t);
    CHECK(Tableau::states_equal(tb, Tableau::from_graph(g)));
  }
}

TEST_CASE("cz rewrite toggles the edge and matches the oracle") {
  Prng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + (int)rng.below(6);
    GraphState g = random_graph(n, rng);
    int a = (int)rng.below(n), b = (int)rng.below(n);
    if (a == b) continue;
    Tableau tb = Tableau::from_graph(g);
    tb.apply_cz(a, b);
    g.apply_cz_rewrite(a, b);
    CHECK(Tableau::states_equal(tb, Tableau::from_graph(g)));
  }
}

TEST_CASE("cut edges on the 4-cycle") {
  GraphState g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 0);
  VertexPartition p{{0, 0, 1, 1}, 2, 2};
  auto cut = cut_edges(g, p);
  CHECK(cut == std::vector<std::pair<int, int>>{{0, 3}, {1, 2}});

  VertexPartition opposite{{0, 1, 0, 1}, 2, 2};
  CHECK(cut_edges(g, opposite).size() == 4);

  GraphState empty(4);
  CHECK(cut_edges(empty, p).empty());

  VertexPartition partial{{0, 0, 1}, 2, 2};
  CHECK_THROWS(cut_edges(g, partial));
}

TEST_CASE("cut edge count is invariant under part relabeling") {
  Prng rng(16);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 4 + (int)rng.below(5);
    GraphState g = random_graph(n, rng);
    VertexPartition p;
    p.g_max = n;
    p.subgraph_count = 3;
    for (int v = 0; v < n; ++v) p.assignment.push_back((int)rng.below(3));
    VertexPartition q = p;
    for (auto& a : q.assignment) a = (a + 1) % 3;
    CHECK(cut_edges(g, p).size() == cut_edges(g, q).size());
  }
}

TEST_CASE("cut rank examples") {
  GraphState star(5);
  for (int leaf = 1; leaf < 5; ++leaf) star.add_edge(0, leaf);
  CHECK(cut_rank(star, {0}) == 1);

  GraphState p4 = path(4);
  CHECK(cut_rank(p4, {0, 1}) == 1);

  GraphState k22(4);
  k22.add_edge(0, 2);
  k22.add_edge(0, 3);
  k22.add_edge(1, 2);
  k22.add_edge(1, 3);
  CHECK(cut_rank(k22, {0, 1}) == 1);
}

TEST_CASE("cut rank is symmetric") {
  Prng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + (int)rng.below(8);
    GraphState g = random_graph(n, rng);
    std::vector<int> a, b;
    for (int v = 0; v < n; ++v)
      (rng.next_bit() ? a : b).push_back(v);
    CHECK(cut_rank(g, a) == cut_rank(g, b));
  }
}

TEST_CASE("graph json io is canonical") {
  GraphState g(4);
  g.add_edge(2, 0);
  g.add_edge(3, 1);
  g.add_edge(0, 1);
  std::string j = g.to_json();
  CHECK(j == R"({"edges":[[0,1],[0,2],[1,3]],"n":4})");
  GraphState back = GraphState::from_json(j);
  CHECK(back.adjacency_equal(g));
  CHECK_THROWS(GraphState::from_json("{\"n\":2}"));
}

TEST_CASE("roles serialize when emitters are present") {
  GraphState g(3);
  g.add_edge(0, 1);
  g.set_role(2, Role::Emitter);
  GraphState back = GraphState::from_json(g.to_json());
  CHECK(back.role(2) == Role::Emitter);
  CHECK(back.role(0) == Role::Photon);
  CHECK(back.adjacency_equal(g));
}

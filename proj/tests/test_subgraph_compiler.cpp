#include "doctest.h"
#include "emitforge/subgraph_compiler.hpp"
#include "oracles.hpp"

using namespace emitforge;
using emitforge::test::oracle_min_disentangles;
using emitforge::test::random_connected_graph;

namespace {

GraphState path_graph(int n) {
  GraphState g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

GraphState star_graph(int n) {
  GraphState g(n);
  for (int leaf = 1; leaf < n; ++leaf) g.add_edge(0, leaf);
  return g;
}

GraphState cycle4() {
  GraphState g = path_graph(4);
  g.add_edge(3, 0);
  return g;
}

}  // namespace

TEST_CASE("min_emitters from cut-rank prefixes") {
  CHECK(min_emitters(path_graph(6), {0, 1, 2, 3, 4, 5}) == 1);
  CHECK(min_emitters(star_graph(5), {0, 1, 2, 3, 4}) == 1);
  CHECK(min_emitters(star_graph(5), {4, 3, 2, 1, 0}) == 1);
  CHECK(min_emitters(cycle4(), {0, 1, 2, 3}) == 2);
  CHECK_THROWS(min_emitters(path_graph(3), {0, 1}));
  CHECK_THROWS(min_emitters(path_graph(3), {0, 1, 1}));
}

TEST_CASE("search finds the zero-CNOT reductions for stars and paths") {
  for (int n = 2; n <= 7; ++n) {
    auto states = search_sequences(path_graph(n), 1, {});
    REQUIRE(!states.empty());
    for (auto& s : states) CHECK(s.disentangle_count() == 0);
  }
  for (int n = 3; n <= 7; ++n) {
    auto states = search_sequences(star_graph(n), 1, {});
    REQUIRE(!states.empty());
    for (auto& s : states) CHECK(s.disentangle_count() == 0);
  }
}

TEST_CASE("search reports infeasibility naming the budget") {
  CHECK_THROWS_WITH_AS(search_sequences(cycle4(), 1, {}),
                       doctest::Contains("ne_limit 1"), std::runtime_error);
}

TEST_CASE("4-cycle at two emitters costs one CNOT") {
  auto states = search_sequences(cycle4(), 2, {});
  REQUIRE(!states.empty());
  for (auto& s : states) CHECK(s.disentangle_count() == 1);
}

TEST_CASE("search minimum equals the brute-force oracle") {
  Prng rng(41);
  HardwareModel hw;
  int checked = 0;
  while (checked < 60) {
    int n = 2 + (int)rng.below(5);  // up to 6 vertices
    GraphState g = random_connected_graph(n, rng, 30 + (int)rng.below(50));
    for (int ne = 1; ne <= std::min(n, 3); ++ne) {
      auto want = oracle_min_disentangles(g, ne);
      if (!want.has_value()) {
        CHECK_THROWS(search_sequences(g, ne, {}));
        continue;
      }
      auto states = search_sequences(g, ne, {});
      REQUIRE(!states.empty());
      CHECK(states.front().disentangle_count() == *want);
    }
    ++checked;
  }
}

TEST_CASE("avg_photon_loss formula on hand-timed circuits") {
  HardwareModel hw;
  Circuit c;
  c.photons = 2;
  c.emitters = 1;
  Gate e0 = Gate::emission(2, 0);
  e0.t = Rat(0);
  Gate e1 = Gate::emission(2, 1);
  e1.t = Rat(5);
  Gate m = Gate::measure_x(2);
  m.t = Rat(99, 10);
  c.gates = {e0, e1, m};
  CHECK(avg_photon_loss(c, hw) == Rat(15, 2));

  Circuit missing;
  missing.photons = 1;
  missing.emitters = 1;
  CHECK_THROWS(avg_photon_loss(missing, hw));
}

TEST_CASE("compiled subgraphs replay onto their targets") {
  Prng rng(42);
  HardwareModel hw;
  for (int trial = 0; trial < 25; ++trial) {
    int n = 2 + (int)rng.below(5);
    GraphState g = random_connected_graph(n, rng);
    if (rng.next_bit())
      for (int v = 0; v < n; ++v)
        g.set_tag(v, Clifford1((std::uint8_t)rng.below(24)));
    auto flex = compile_flexible(g, hw);
    REQUIRE(!flex.variants.empty());
    for (auto& [ne, cand] : flex.variants) {
      CHECK(cand.held.empty());
      CHECK(validate(cand.circuit, hw).empty());
      CHECK(cand.ne_used <= ne);
      Tableau got = replay_photons(cand.circuit, hw, {rng.next()});
      CHECK(Tableau::states_equal(got, Tableau::from_graph(g)));
    }
  }
}

TEST_CASE("emission-delay dominance among explored candidates") {
  HardwareModel hw;
  Prng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 3 + (int)rng.below(3);
    GraphState g = random_connected_graph(n, rng);
    auto states = search_sequences(g, 2, {});
    if (states.empty()) continue;
    CompilationCandidate best = compile_subgraph(g, 2, hw);
    for (auto& s : states) {
      auto reduced = s.reverse_to_circuit();
      Circuit timed = delay_emissions(time_circuit(reduced.circuit, hw), hw);
      Rat end = circuit_end_time(timed, hw);
      Rat total(0);
      int count = 0;
      for (auto& gate : timed.gates)
        if (gate.kind == GateKind::Emission) {
          total += end - gate.t;
          ++count;
        }
      if (count) CHECK(best.avg_t_loss <= total / Rat(count));
    }
  }
}

TEST_CASE("flexible budgets: stars keep one emitter and zero CNOTs") {
  HardwareModel hw;
  auto flex = compile_flexible(star_graph(5), hw);
  CHECK(flex.ne_min == 1);
  REQUIRE(flex.variants.size() == 3);
  Rat d = flex.variants.at(1).duration;
  for (auto& [ne, cand] : flex.variants) {
    CHECK(cand.n_ee_cnot == 0);
    CHECK(cand.duration == d);  // extra emitters unused
  }
}

TEST_CASE("flexible budgets: the 4-cycle realizes ne_min = 2") {
  HardwareModel hw;
  auto flex = compile_flexible(cycle4(), hw);
  CHECK(flex.ne_min == 2);
  CHECK(flex.variants.at(2).n_ee_cnot == 1);
  Rat prev = flex.variants.at(2).duration;
  for (int b = 3; b <= 4; ++b) {
    CHECK(flex.variants.at(b).duration <= prev);
    prev = flex.variants.at(b).duration;
  }
}

TEST_CASE("single-vertex graphs compile to emit plus measure-out") {
  HardwareModel hw;
  GraphState one(1);
  auto cand = compile_subgraph(one, 1, hw);
  CHECK(cand.n_ee_cnot == 0);
  int emissions = 0, measures = 0;
  for (auto& g : cand.circuit.gates) {
    emissions += g.kind == GateKind::Emission;
    measures += g.kind == GateKind::EmitterMeasureX;
  }
  CHECK(emissions == 1);
  CHECK(measures == 1);
  // Emission, the photon's frame gate, then the measure-out.
  CHECK(cand.avg_t_loss == hw.t_emission + hw.t_1q + hw.t_measure);
}

TEST_CASE("empty subgraph compiles to an empty variant map") {
  HardwareModel hw;
  GraphState empty(0);
  auto flex = compile_flexible(empty, hw);
  CHECK(flex.variants.empty());
}

TEST_CASE("held vertices stay on live emitters") {
  HardwareModel hw;
  GraphState g = path_graph(3);
  auto cand = compile_subgraph(g, 2, hw, {0});
  REQUIRE(cand.held.size() == 1);
  CHECK(cand.held[0].photon == 0);
  // The held photon is never emitted locally.
  for (auto& gate : cand.circuit.gates)
    if (gate.kind == GateKind::Emission) CHECK(gate.q1 != 0);
  // Its emitter has no measure-out.
  for (auto& gate : cand.circuit.gates)
    if (gate.kind == GateKind::EmitterMeasureX)
      CHECK(gate.q0 != cand.held[0].emitter);
}

TEST_CASE("candidate metrics match recomputation") {
  HardwareModel hw;
  Prng rng(44);
  GraphState g = random_connected_graph(6, rng);
  auto cand = compile_subgraph(g, 2, hw);
  Metrics m = metrics(cand.circuit, hw);
  CHECK(m.n_ee_cnot == cand.n_ee_cnot);
  CHECK(m.duration == cand.duration);
  CHECK(m.avg_t_loss == cand.avg_t_loss);
  CHECK(avg_photon_loss(cand.circuit, hw) == cand.avg_t_loss);
}

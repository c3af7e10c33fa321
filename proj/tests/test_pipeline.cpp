#include "doctest.h"
#include "emitforge/benchgen.hpp"
#include "emitforge/pipeline.hpp"
#include "oracles.hpp"

using namespace emitforge;
using emitforge::test::random_connected_graph;

TEST_CASE("benchmark generators") {
  GraphState l22 = gen_lattice(2, 2);
  CHECK(l22.num_vertices() == 4);
  CHECK(l22.edge_count() == 4);  // the 4-cycle
  CHECK(l22.degree(0) == 2);

  GraphState t22 = gen_tree(2, 2);
  CHECK(t22.num_vertices() == 7);
  CHECK(t22.edge_count() == 6);

  auto w1 = gen_waxman(20, 0.6, 0.4, 7);
  auto w2 = gen_waxman(20, 0.6, 0.4, 7);
  CHECK(w1.graph.to_json() == w2.graph.to_json());
  CHECK(w1.connected);
  CHECK_THROWS(gen_waxman(10, 1.5, 0.4, 1));
}

TEST_CASE("pipeline end to end on small mixed graphs") {
  HardwareModel hw;
  Prng rng(71);
  PipelineOptions opt;
  opt.partition_budget_secs = 0.02;
  opt.g_max = 4;
  opt.lc_depth = 2;
  for (int trial = 0; trial < 12; ++trial) {
    int n = 3 + (int)rng.below(7);
    GraphState g = random_connected_graph(n, rng, 30 + (int)rng.below(40));
    opt.seed = rng.next();
    PipelineResult res = compile_pipeline(g, hw, opt);
    auto rep = verify_circuit(g, res.circuit, hw, rng.next());
    INFO(rep.detail);
    CHECK(rep.pass);
    CHECK(usage_curve(res.circuit, hw).max_level() <= res.ne_limit);
  }
}

TEST_CASE("pipeline on the named benchmark families") {
  HardwareModel hw;
  PipelineOptions opt;
  opt.partition_budget_secs = 0.02;
  opt.lc_depth = 2;

  GraphState lattice = gen_lattice(3, 2);
  auto r1 = compile_pipeline(lattice, hw, opt);
  CHECK(verify_circuit(lattice, r1.circuit, hw).pass);

  GraphState tree = gen_tree(2, 2);
  auto r2 = compile_pipeline(tree, hw, opt);
  CHECK(verify_circuit(tree, r2.circuit, hw).pass);

  auto wax = gen_waxman(9, 0.6, 0.4, 5);
  auto r3 = compile_pipeline(wax.graph, hw, opt);
  CHECK(verify_circuit(wax.graph, r3.circuit, hw).pass);
}

TEST_CASE("stem count equals the partition cut") {
  HardwareModel hw;
  PipelineOptions opt;
  opt.partition_budget_secs = 0.02;
  opt.g_max = 3;
  opt.lc_depth = 0;
  opt.portfolio_guard = false;  // exercise the stem path itself
  // path of 6: one cut with K=1 when split 3+3
  GraphState path(6);
  for (int i = 0; i + 1 < 6; ++i) path.add_edge(i, i + 1);
  auto res = compile_pipeline(path, hw, opt);
  CHECK(res.cut_count == 1);
  CHECK(res.circuit.ee_cnot_count() == res.cut_count);
  CHECK(verify_circuit(path, res.circuit, hw).pass);
}

TEST_CASE("baseline compiles and verifies") {
  HardwareModel hw;
  Prng rng(72);
  for (int trial = 0; trial < 8; ++trial) {
    int n = 3 + (int)rng.below(6);
    GraphState g = random_connected_graph(n, rng);
    auto base = compile_baseline(g, hw, 2);
    auto rep = verify_circuit(g, base.circuit, hw);
    INFO(rep.detail);
    CHECK(rep.pass);
  }
}

TEST_CASE("factor pair keeps duration monotone in the cap") {
  HardwareModel hw;
  Prng rng(73);
  PipelineOptions opt;
  opt.partition_budget_secs = 0.02;
  opt.g_max = 4;
  opt.lc_depth = 1;
  for (int trial = 0; trial < 6; ++trial) {
    int n = 4 + (int)rng.below(6);
    GraphState g = random_connected_graph(n, rng);
    opt.seed = rng.next();
    auto pair = compile_at_factors(g, hw, opt);
    CHECK(pair.at_2_0.metric.duration <= pair.at_1_5.metric.duration);
    CHECK(verify_circuit(g, pair.at_1_5.circuit, hw).pass);
    CHECK(verify_circuit(g, pair.at_2_0.circuit, hw).pass);
  }
}

TEST_CASE("verify reports the first discrepancy") {
  HardwareModel hw;
  GraphState g = gen_tree(2, 1);
  PipelineOptions opt;
  opt.partition_budget_secs = 0.01;
  auto res = compile_pipeline(g, hw, opt);
  REQUIRE(verify_circuit(g, res.circuit, hw).pass);

  // deleting a gate must fail verification
  Circuit broken = res.circuit;
  broken.gates.pop_back();
  CHECK(!verify_circuit(g, broken, hw).pass);

  // a circuit for a different graph must fail
  GraphState other = gen_tree(2, 1);
  other.toggle_edge(1, 2);
  CHECK(!verify_circuit(other, res.circuit, hw).pass);
}

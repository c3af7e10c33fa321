#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emitforge/graph.hpp"

namespace emitforge {

// Joint search over depth-limited local complementation and vertex
// partitions, minimizing the number of inter-subgraph edges K.
struct PartitionModel {
  GraphState graph;
  int lc_depth = 15;   // max LC steps l
  int g_max = 7;       // subgraph size cap
  double time_budget_secs = 1200;  // heuristic budget; iterations derived
                                   // deterministically (200k iters / second)
  std::uint64_t seed = 1;
  std::string trace_path;  // optional incumbent CSV: iteration,K,elapsed_ms
};

struct PartitionSolution {
  std::vector<int> lc_sequence;  // vertices, applied in order
  VertexPartition partition;
  int cut_count = 0;  // K, recomputed independently of the search
  enum class Proof { Optimal, TimeLimited } proof = Proof::TimeLimited;
  int parts_used = 0;
  bool part_bound_binding = false;  // used the full ceil(n/g_max) budget
};

// Exhaustive search: LC sequences up to the depth (deduplicated by
// adjacency, shallowest first) x branch-and-bound over assignments with an
// admissible crossing-edge bound. Instances above the cap are refused.
PartitionSolution solve_exact(const PartitionModel& m, int exact_cap = 12);

// Greedy multilevel-style seed + simulated annealing over
// (lc_sequence, partition). Never returns worse than the seed; a zero
// budget returns the seed itself.
PartitionSolution solve_heuristic(const PartitionModel& m);

// The edge-status update of one LC step: toggles pairs inside N(v) for the
// chosen vertex; identity when no vertex is chosen. More than one chosen
// vertex is an error.
GraphState step_dynamics(const GraphState& e_t, const std::vector<int>& chosen);

}  // namespace emitforge

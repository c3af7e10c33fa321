#pragma once

#include <cstdint>

#include "emitforge/graph.hpp"

namespace emitforge {

GraphState gen_lattice(int width, int height);

// Complete b-ary tree with `depth` levels below the root.
GraphState gen_tree(int branching, int depth);

struct WaxmanResult {
  GraphState graph;
  bool connected = false;
  int attempts = 0;
};

// Vertices uniform in the unit square; edge (u,v) with probability
// alpha * exp(-d(u,v) / (beta * L)), L the largest pairwise distance.
// Reseeded retries until connected (bounded), else reported disconnected.
WaxmanResult gen_waxman(int n, double alpha, double beta, std::uint64_t seed);

}  // namespace emitforge

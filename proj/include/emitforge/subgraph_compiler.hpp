#pragma once

#include <map>
#include <string>
#include <vector>

#include "emitforge/hardware.hpp"
#include "emitforge/reduction.hpp"

namespace emitforge {

struct SearchConfig {
  int candidate_cap = 100;      // minimal-CNOT histories forwarded to step 2
  long node_budget = 400000;    // DFS expansion guard; exhaustion keeps the
                                // best sequence found instead of failing
};

struct CompilationCandidate {
  Circuit circuit;               // timed, photons are subgraph-local ids
  std::vector<HeldVertex> held;  // boundary vertices awaiting transfer
  int n_ee_cnot = 0;
  Rat avg_t_loss;                // over locally emitted photons
  Rat duration;
  int ne_used = 0;               // peak concurrent emitters in the reduction
};

// Height-function peak: max over prefixes of the emission order of the
// GF(2) cut rank. Lower-bounds the emitters needed for that order.
int min_emitters(const GraphState& g, const std::vector<int>& emission_order);

// Depth-first search over reduction sequences under the emitter budget,
// lowest-degree photons first, branches above the incumbent disentangle
// count pruned. Returns terminal states achieving the minimal count
// (capped), best-first deterministic. `held` photons are forced onto
// emitters first and never transferred locally.
std::vector<ReductionState> search_sequences(const GraphState& g,
                                             int ne_limit,
                                             const std::vector<int>& held,
                                             const SearchConfig& cfg = {});

// Mean of (circuit end - emission start) over all photons, tau_QD units.
Rat avg_photon_loss(const Circuit& c, const HardwareModel& hw);

CompilationCandidate compile_subgraph(const GraphState& g, int ne_limit,
                                      const HardwareModel& hw,
                                      const std::vector<int>& held = {},
                                      const SearchConfig& cfg = {});

struct FlexibleResult {
  int ne_min = 0;                             // realized minimal budget
  std::map<int, CompilationCandidate> variants;  // ne_limit -> candidate
  std::vector<std::string> notes;
};

// Compiles under ne_min, ne_min+1, ne_min+2 where ne_min is the smallest
// feasible budget at or above the cut-rank bound. Durations are
// non-increasing in the budget: a variant that fails to improve on a
// smaller budget's circuit reuses it.
FlexibleResult compile_flexible(const GraphState& g, const HardwareModel& hw,
                                const std::vector<int>& held = {},
                                const SearchConfig& cfg = {});

}  // namespace emitforge

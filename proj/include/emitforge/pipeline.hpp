#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emitforge/partitioner.hpp"
#include "emitforge/scheduler.hpp"

namespace emitforge {

struct PipelineOptions {
  int g_max = 7;
  int lc_depth = 15;
  double ne_factor = 1.5;          // Ne_limit = ceil(factor * Ne_min_total)
  double partition_budget_secs = 1200;
  std::uint64_t seed = 1;
  SearchConfig search;
  std::string trace_path;          // partitioner incumbent CSV
  bool exact_partition_when_small = true;  // n <= 12 and l <= 4
  // Also evaluate the whole-graph naive reduction and keep it when the
  // partitioned schedule fails to dominate on (duration, photon-alive time).
  bool portfolio_guard = true;
};

struct PipelineResult {
  Circuit circuit;
  SchedulePlan plan;
  int cut_count = 0;               // K of the realized partition
  int lc_steps = 0;
  int parts = 0;
  int ne_min_total = 0;            // whole-graph lower bound
  int ne_limit = 0;                // applied cap (floor-raised if needed)
  bool cap_raised = false;         // floor exceeded the factor cap
  Metrics metric;
  std::vector<std::string> notes;
};

// Full compile: partition (depth-limited LC), per-subgraph flexible
// compilation, recombination with stems under the emitter cap.
PipelineResult compile_pipeline(const GraphState& target,
                                const HardwareModel& hw,
                                const PipelineOptions& opt);

// Whole-graph heuristic reduction: no partitioning, no LC optimization,
// first complete sequence found, ASAP timing including emissions. The cap
// is bumped above `ne_limit` until a sequence exists.
struct BaselineResult {
  Circuit circuit;
  int ne_limit_used = 0;
  Metrics metric;
};
BaselineResult compile_baseline(const GraphState& target,
                                const HardwareModel& hw, int ne_limit,
                                const SearchConfig& cfg = {});

// Runs the pipeline at 1.5x and 2x Ne_min; when the larger cap fails to
// shorten the schedule it reuses the smaller cap's circuit (feasible a
// fortiori), keeping duration monotone in the budget.
struct FactorPair {
  PipelineResult at_1_5;
  PipelineResult at_2_0;
};
FactorPair compile_at_factors(const GraphState& target, const HardwareModel& hw,
                              PipelineOptions opt);

struct VerifyReport {
  bool pass = false;
  std::string detail;  // first violation on failure
};
VerifyReport verify_circuit(const GraphState& target, const Circuit& circuit,
                            const HardwareModel& hw, std::uint64_t seed = 1);

}  // namespace emitforge

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "emitforge/subgraph_compiler.hpp"

namespace emitforge {

// Piecewise-constant emitters-in-use over time. `pts` holds (time, level
// from that time onward), sorted; level zero before the first point. For
// circuits the final level returns to zero; packing curves for subcircuits
// with held emitters keep a positive tail.
struct UsageCurve {
  std::vector<std::pair<Rat, int>> pts;
  Rat duration;

  int level_at(const Rat& t) const;
  int max_level() const;
  int tail_level() const { return pts.empty() ? 0 : pts.back().second; }
};

// Emitter counted in use from its first gate to its last gate's completion.
UsageCurve usage_curve(const Circuit& c, const HardwareModel& hw);

std::string usage_csv(const UsageCurve& curve);  // time,emitters_in_use

// P_c = photons / duration; zero-duration circuits sort as +infinity
// (scheduled last, i.e. latest).
struct PriorityValue {
  bool infinite = false;
  Rat value;
};
PriorityValue priority(const Circuit& c, const HardwareModel& hw);
bool operator<(const PriorityValue& a, const PriorityValue& b);

struct SchedulePlan {
  int ne_limit = 0;
  struct Entry {
    int subgraph = -1;
    int variant = 0;   // chosen emitter budget
    Rat offset;        // placement start, post-normalization
  };
  std::vector<Entry> placements;
  // (subgraph, local emitter) -> physical emitter qubit id
  std::map<std::pair<int, int>, int> emitter_map;
  UsageCurve total_usage;
  Rat duration;
};

// Largest offset <= horizon - curve.duration keeping the summed usage within
// the plan's cap; walks leftward past the horizon when nothing fits. Throws
// when the curve alone exceeds the cap.
Rat alap_insert(const SchedulePlan& plan, const UsageCurve& curve,
                const Rat& horizon);

struct SubgraphInput {
  int id = 0;
  std::vector<int> vertices;  // global vertex ids; local index = position
  FlexibleResult flex;
};

struct CombineResult {
  Circuit circuit;  // photons [0, n), physical emitters [n, n + used)
  SchedulePlan plan;
  std::vector<std::string> notes;
};

// Packs the chosen subgraph variants ALAP under the cap (higher priority
// later), realizes each cut edge as one emitter-emitter CNOT between the
// hosting emitters once every internal part is done, then completes the
// deferred boundary transfers. Physical emitters are reused time-disjointly.
CombineResult combine(const std::vector<SubgraphInput>& subs,
                      const std::vector<std::pair<int, int>>& stem_edges,
                      int total_photons, int ne_limit,
                      const HardwareModel& hw);

// Greedy post-pass: upgrades placed subcircuits to their ne_min+1 / ne_min+2
// variants when a full repack strictly shortens the schedule. Never worse
// than its input.
CombineResult relax_and_fill(const CombineResult& base,
                             const std::vector<SubgraphInput>& subs,
                             const std::vector<std::pair<int, int>>& stem_edges,
                             int total_photons, int ne_limit,
                             const HardwareModel& hw);

}  // namespace emitforge

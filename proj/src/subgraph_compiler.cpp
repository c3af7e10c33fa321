#include "emitforge/subgraph_compiler.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace emitforge {

int min_emitters(const GraphState& g, const std::vector<int>& emission_order) {
  int n = g.num_vertices();
  if ((int)emission_order.size() != n)
    throw std::invalid_argument("min_emitters: not a permutation");
  std::vector<bool> seen(n, false);
  for (int v : emission_order) {
    if (v < 0 || v >= n || seen[v])
      throw std::invalid_argument("min_emitters: not a permutation");
    seen[v] = true;
  }
  int peak = 0;
  std::vector<int> prefix;
  for (int k = 0; k + 1 < n; ++k) {
    prefix.push_back(emission_order[k]);
    peak = std::max(peak, cut_rank(g, prefix));
  }
  return peak;
}

namespace {

struct Search {
  const SearchConfig& cfg;
  long nodes = 0;
  bool budget_hit = false;
  // For each state, the largest disentangle budget that provably fails.
  std::unordered_map<std::string, int> failed;

  explicit Search(const SearchConfig& c) : cfg(c) {}

  // Lowest-degree-first among photon-reducing ops, then the enumeration
  // order; disentangles last.
  static std::vector<ReversedOp> heuristic_ops(const ReductionState& s) {
    auto ops = s.applicable_ops();
    auto rank = [&](const ReversedOp& op) {
      int klass, deg = 0;
      switch (op.kind) {
        case ReversedOpKind::PhotonAbsorption:
          klass = 0;
          deg = s.graph().degree(op.b);
          break;
        case ReversedOpKind::SwapWithFreeEmitter:
          klass = 1;
          deg = s.graph().degree(op.a);
          break;
        default:
          klass = 2;
      }
      return std::tuple<int, int>(klass, deg);
    };
    std::stable_sort(ops.begin(), ops.end(),
                     [&](const ReversedOp& a, const ReversedOp& b) {
                       return rank(a) < rank(b);
                     });
    return ops;
  }

  // Unbounded first solution, heuristic order; ops recorded leaf-first.
  // States fully explored without success are hopeless at any budget.
  bool first_solution(const ReductionState& s, std::vector<ReversedOp>* out) {
    if (s.is_terminal()) return true;
    if (++nodes > cfg.node_budget) {
      budget_hit = true;
      return false;
    }
    auto key = s.state_key();
    auto it = failed.find(key);
    if (it != failed.end() && it->second >= kHopeless) return false;
    for (auto& op : heuristic_ops(s)) {
      ReductionState next = s;
      next.apply_op(op);
      if (first_solution(next, out)) {
        if (out) out->push_back(op);
        return true;
      }
    }
    if (!budget_hit) failed[key] = kHopeless;
    return false;
  }

  // True once any complete reduction within `budget` disentangles exists;
  // the first witness lands in `witness`.
  bool feasible(const ReductionState& s, int budget,
                std::vector<ReversedOp>* witness) {
    if (s.is_terminal()) return true;
    if (++nodes > cfg.node_budget) {
      budget_hit = true;
      return false;
    }
    auto key = s.state_key();
    auto it = failed.find(key);
    if (it != failed.end() && budget <= it->second) return false;
    for (auto& op : heuristic_ops(s)) {
      int cost = op.kind == ReversedOpKind::EmitterDisentangle ? 1 : 0;
      if (cost > budget) continue;
      ReductionState next = s;
      next.apply_op(op);
      if (feasible(next, budget - cost, witness)) {
        if (witness) witness->push_back(op);
        return true;
      }
    }
    if (!budget_hit) {
      auto& rec = failed[key];
      rec = std::max(rec, budget);
    }
    return false;
  }

  static constexpr int kHopeless = 1 << 20;

  void enumerate(const ReductionState& s, int budget,
                 std::vector<ReductionState>& out) {
    if ((int)out.size() >= cfg.candidate_cap) return;
    if (s.is_terminal()) {
      out.push_back(s);
      return;
    }
    if (++nodes > cfg.node_budget) return;
    auto key = s.state_key();
    auto it = failed.find(key);
    if (it != failed.end() && budget <= it->second) return;
    for (auto& op : heuristic_ops(s)) {
      int cost = op.kind == ReversedOpKind::EmitterDisentangle ? 1 : 0;
      if (cost > budget) continue;
      ReductionState next = s;
      next.apply_op(op);
      enumerate(next, budget - cost, out);
      if ((int)out.size() >= cfg.candidate_cap) return;
    }
  }
};

ReductionState make_root(const GraphState& g, int ne_limit,
                         const std::vector<int>& held) {
  ReductionState root(g, ne_limit);
  std::vector<int> hs = held;
  std::sort(hs.begin(), hs.end());
  for (int p : hs) {
    bool placed = false;
    for (auto& op : root.applicable_ops()) {
      if (op.kind == ReversedOpKind::SwapWithFreeEmitter && op.a == p) {
        ReversedOp hold = op;
        hold.hold = true;
        root.apply_op(hold);
        placed = true;
        break;
      }
    }
    if (!placed)
      throw std::runtime_error(
          "search_sequences: infeasible, cannot hold boundary vertex " +
          std::to_string(p) + " under ne_limit " + std::to_string(ne_limit));
  }
  return root;
}

}  // namespace

std::vector<ReductionState> search_sequences(const GraphState& g,
                                             int ne_limit,
                                             const std::vector<int>& held,
                                             const SearchConfig& cfg) {
  if (g.num_vertices() == 0) return {ReductionState(g, ne_limit)};
  ReductionState root = make_root(g, ne_limit, held);
  Search search(cfg);
  // Upper bound from the plain greedy descent. Exhausting it without hitting
  // the node budget proves infeasibility under this emitter cap.
  std::vector<ReversedOp> witness;
  if (!search.first_solution(root, &witness)) {
    if (search.budget_hit)
      throw std::runtime_error(
          "search_sequences: node budget exhausted without a reduction "
          "under ne_limit " + std::to_string(ne_limit));
    throw std::runtime_error("search_sequences: infeasible under ne_limit " +
                             std::to_string(ne_limit));
  }
  int dstar = 0;
  {
    ReductionState probe = root;
    for (auto it = witness.rbegin(); it != witness.rend(); ++it)
      probe.apply_op(*it);
    dstar = probe.disentangle_count();
  }
  // Tighten with iterative deepening while the budget lasts.
  for (int budget = 0; budget < dstar; ++budget) {
    std::vector<ReversedOp> better;
    if (search.feasible(root, budget, &better)) {
      witness = std::move(better);
      dstar = budget;
      break;
    }
    if (search.budget_hit) break;
  }
  ReductionState witness_state = root;
  for (auto it = witness.rbegin(); it != witness.rend(); ++it)
    witness_state.apply_op(*it);
  std::vector<ReductionState> out;
  search.enumerate(root, dstar, out);
  bool have_witness = false;
  for (auto& s : out)
    if (s.state_key() == witness_state.state_key() &&
        s.history().size() == witness_state.history().size())
      have_witness = true;
  if (out.empty() || (!have_witness && (int)out.size() < cfg.candidate_cap))
    out.push_back(witness_state);
  // Keep only the best disentangle count actually achieved.
  int best = 1 << 20;
  for (auto& s : out) best = std::min(best, s.disentangle_count());
  std::vector<ReductionState> pruned;
  for (auto& s : out)
    if (s.disentangle_count() == best) pruned.push_back(std::move(s));
  return pruned;
}

Rat avg_photon_loss(const Circuit& c, const HardwareModel& hw) {
  auto emits = emission_times(c);  // throws on unemitted photons
  Rat end = circuit_end_time(c, hw);
  Rat total(0);
  for (auto& t : emits) total += end - t;
  return c.photons ? total / Rat(c.photons) : Rat(0);
}

namespace {

// Loss over locally emitted photons only; held boundary photons are emitted
// later by the scheduler.
Rat partial_loss(const Circuit& c, const HardwareModel& hw) {
  Rat end = circuit_end_time(c, hw);
  Rat total(0);
  int count = 0;
  for (auto& g : c.gates)
    if (g.kind == GateKind::Emission) {
      total += end - g.t;
      ++count;
    }
  return count ? total / Rat(count) : Rat(0);
}

CompilationCandidate finish_candidate(const ReductionState& s,
                                      const HardwareModel& hw) {
  auto reduced = s.reverse_to_circuit();
  Circuit timed = delay_emissions(time_circuit(reduced.circuit, hw), hw);
  CompilationCandidate cand;
  cand.circuit = std::move(timed);
  cand.held = reduced.held;
  cand.n_ee_cnot = cand.circuit.ee_cnot_count();
  cand.avg_t_loss = partial_loss(cand.circuit, hw);
  cand.duration = circuit_end_time(cand.circuit, hw);
  cand.ne_used = s.peak_active();
  return cand;
}

}  // namespace

CompilationCandidate compile_subgraph(const GraphState& g, int ne_limit,
                                      const HardwareModel& hw,
                                      const std::vector<int>& held,
                                      const SearchConfig& cfg) {
  auto states = search_sequences(g, ne_limit, held, cfg);
  if (states.empty())
    throw std::logic_error("compile_subgraph: empty candidate set");
  bool have = false;
  CompilationCandidate best;
  std::string best_bytes;
  for (auto& s : states) {
    CompilationCandidate cand = finish_candidate(s, hw);
    std::string bytes = serialize(cand.circuit);
    bool better = false;
    if (!have) {
      better = true;
    } else if (cand.avg_t_loss != best.avg_t_loss) {
      better = cand.avg_t_loss < best.avg_t_loss;
    } else if (cand.duration != best.duration) {
      better = cand.duration < best.duration;
    } else {
      better = bytes < best_bytes;
    }
    if (better) {
      best = std::move(cand);
      best_bytes = std::move(bytes);
      have = true;
    }
  }
  return best;
}

FlexibleResult compile_flexible(const GraphState& g, const HardwareModel& hw,
                                const std::vector<int>& held,
                                const SearchConfig& cfg) {
  FlexibleResult out;
  int n = g.num_vertices();
  if (n == 0) return out;
  // Cut-rank lower bound over a few sampled emission orders.
  std::vector<int> identity(n), by_deg_desc(n), by_deg_asc(n);
  for (int v = 0; v < n; ++v) identity[v] = by_deg_desc[v] = by_deg_asc[v] = v;
  std::stable_sort(by_deg_desc.begin(), by_deg_desc.end(),
                   [&](int a, int b) { return g.degree(a) > g.degree(b); });
  std::stable_sort(by_deg_asc.begin(), by_deg_asc.end(),
                   [&](int a, int b) { return g.degree(a) < g.degree(b); });
  int bound = min_emitters(g, identity);
  bound = std::min(bound, min_emitters(g, by_deg_desc));
  bound = std::min(bound, min_emitters(g, by_deg_asc));
  bound = std::max({bound, 1, (int)held.size()});
  int base = -1;
  CompilationCandidate base_cand;
  for (int b = bound; b <= n + (int)held.size(); ++b) {
    try {
      base_cand = compile_subgraph(g, b, hw, held, cfg);
      base = b;
      break;
    } catch (const std::runtime_error&) {
      out.notes.push_back("ne_limit " + std::to_string(b) + " infeasible");
    }
  }
  if (base < 0)
    throw std::runtime_error("compile_flexible: no feasible budget for " +
                             std::to_string(n) + "-vertex subgraph");
  out.ne_min = base;
  out.variants[base] = base_cand;
  const CompilationCandidate* prev = &out.variants[base];
  for (int extra = 1; extra <= 2; ++extra) {
    int b = base + extra;
    CompilationCandidate cand = compile_subgraph(g, b, hw, held, cfg);
    if (cand.duration >= prev->duration) cand = *prev;
    out.variants[b] = std::move(cand);
    prev = &out.variants[b];
  }
  return out;
}

}  // namespace emitforge

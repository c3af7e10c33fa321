#include "emitforge/scheduler.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace emitforge {

namespace {

struct Span {
  Rat start;
  Rat end;        // ignored when open
  bool open = false;
};

// Per-emitter in-use span of a circuit: first gate start to last gate end.
std::vector<Span> emitter_spans(const Circuit& c, const HardwareModel& hw) {
  std::vector<Span> spans(c.emitters);
  std::vector<bool> seen(c.emitters, false);
  for (auto& g : c.gates) {
    for (int q : {g.q0, g.q1}) {
      if (q < c.photons || q >= c.photons + c.emitters) continue;
      int e = q - c.photons;
      Rat end = g.t + hw.duration_of(g.kind);
      if (!seen[e]) {
        spans[e] = {g.t, end, false};
        seen[e] = true;
      } else {
        if (g.t < spans[e].start) spans[e].start = g.t;
        if (end > spans[e].end) spans[e].end = end;
      }
    }
  }
  std::vector<Span> out;
  for (int e = 0; e < c.emitters; ++e)
    if (seen[e]) out.push_back(spans[e]);
  return out;
}

UsageCurve curve_from_spans(const std::vector<Span>& spans, Rat duration) {
  std::map<Rat, int> delta;
  bool any_open = false;
  for (auto& s : spans) {
    delta[s.start] += 1;
    if (s.open) any_open = true;
    else delta[s.end] -= 1;
  }
  UsageCurve curve;
  curve.duration = duration;
  int level = 0;
  for (auto& [t, d] : delta) {
    if (d == 0) continue;
    level += d;
    if (!curve.pts.empty() && curve.pts.back().first == t)
      curve.pts.back().second = level;
    else
      curve.pts.emplace_back(t, level);
  }
  (void)any_open;
  return curve;
}

}  // namespace

int UsageCurve::level_at(const Rat& t) const {
  int level = 0;
  for (auto& [time, l] : pts) {
    if (time > t) break;
    level = l;
  }
  return level;
}

int UsageCurve::max_level() const {
  int m = 0;
  for (auto& [t, l] : pts) m = std::max(m, l);
  return m;
}

UsageCurve usage_curve(const Circuit& c, const HardwareModel& hw) {
  return curve_from_spans(emitter_spans(c, hw), circuit_end_time(c, hw));
}

std::string usage_csv(const UsageCurve& curve) {
  std::ostringstream os;
  os << "time,emitters_in_use\n";
  for (auto& [t, l] : curve.pts)
    os << t.to_double() << "," << l << "\n";
  return os.str();
}

PriorityValue priority(const Circuit& c, const HardwareModel& hw) {
  Rat d = circuit_end_time(c, hw);
  if (d == Rat(0)) return {true, Rat(0)};
  return {false, Rat(c.photons) / d};
}

bool operator<(const PriorityValue& a, const PriorityValue& b) {
  if (a.infinite != b.infinite) return !a.infinite;
  if (a.infinite) return false;
  return a.value < b.value;
}

namespace {

// Sum of the aggregate and the shifted candidate stays within the cap?
// Levels persist past the last breakpoint (open tails included), so checking
// every breakpoint of either curve suffices.
bool fits(const UsageCurve& agg, const UsageCurve& cand, const Rat& offset,
          int cap) {
  auto check = [&](const Rat& t) {
    int level = agg.level_at(t);
    // candidate level at local time t - offset
    int cl = 0;
    for (auto& [tc, lc] : cand.pts) {
      if (tc + offset > t) break;
      cl = lc;
    }
    return level + cl <= cap;
  };
  for (auto& [t, l] : agg.pts)
    if (!check(t)) return false;
  for (auto& [t, l] : cand.pts)
    if (!check(t + offset)) return false;
  return true;
}

UsageCurve merge_curves(const UsageCurve& a, const UsageCurve& b,
                        const Rat& b_offset) {
  std::map<Rat, int> levels;
  for (auto& [t, l] : a.pts) levels[t] += 0;  // collect times
  for (auto& [t, l] : b.pts) levels[t + b_offset] += 0;
  UsageCurve out;
  out.duration = std::max(a.duration, b.duration + b_offset);
  for (auto& [t, unused] : levels) {
    int l = a.level_at(t) + [&] {
      int lvl = 0;
      for (auto& [tb, lb] : b.pts) {
        if (tb + b_offset > t) break;
        lvl = lb;
      }
      return lvl;
    }();
    if (!out.pts.empty() && out.pts.back().second == l) continue;
    out.pts.emplace_back(t, l);
  }
  return out;
}

}  // namespace

Rat alap_insert(const SchedulePlan& plan, const UsageCurve& curve,
                const Rat& horizon) {
  if (curve.max_level() > plan.ne_limit)
    throw std::runtime_error("alap_insert: curve exceeds the emitter cap");
  Rat latest = horizon - curve.duration;
  std::set<Rat> offsets;
  offsets.insert(latest);
  for (auto& [ta, la] : plan.total_usage.pts)
    for (auto& [tc, lc] : curve.pts) {
      Rat o = ta - tc;
      if (o <= latest) offsets.insert(o);
    }
  // leftmost fallback: entirely before everything placed
  Rat leftmost = latest;
  if (!plan.total_usage.pts.empty())
    leftmost = plan.total_usage.pts.front().first - curve.duration;
  offsets.insert(std::min(leftmost, latest));
  for (auto it = offsets.rbegin(); it != offsets.rend(); ++it)
    if (fits(plan.total_usage, curve, *it, plan.ne_limit)) return *it;
  throw std::runtime_error("alap_insert: no feasible offset");
}

namespace {

struct Materialized {
  Circuit circuit;
  SchedulePlan plan;
};

const CompilationCandidate& variant_of(const SubgraphInput& sub, int budget) {
  auto it = sub.flex.variants.find(budget);
  if (it == sub.flex.variants.end())
    throw std::logic_error("combine: missing variant");
  return it->second;
}

// Packing + stem scheduling + physical assignment for one variant selection.
Materialized materialize(const std::vector<SubgraphInput>& subs,
                         const std::map<int, int>& selection,
                         const std::vector<std::pair<int, int>>& stem_edges,
                         int total_photons, int ne_limit,
                         const HardwareModel& hw) {
  SchedulePlan plan;
  plan.ne_limit = ne_limit;
  // Order: descending priority, then more photons, then id.
  std::vector<const SubgraphInput*> order;
  for (auto& s : subs)
    if (!s.vertices.empty()) order.push_back(&s);
  std::vector<std::pair<PriorityValue, const SubgraphInput*>> keyed;
  for (auto* s : order) {
    auto& cand = variant_of(*s, selection.at(s->id));
    keyed.emplace_back(priority(cand.circuit, hw), s);
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](auto& a, auto& b) {
    if (!(a.first < b.first) && !(b.first < a.first)) {
      int pa = a.second->vertices.size(), pb = b.second->vertices.size();
      if (pa != pb) return pa > pb;
      return a.second->id < b.second->id;
    }
    return b.first < a.first;  // higher priority first (placed latest)
  });

  // Effective packing curves: held emitters stay busy to +infinity,
  // expressed as a step tail that never drops back to zero.
  for (auto& [prio, subp] : keyed) {
    const SubgraphInput& sub = *subp;
    auto& cand = variant_of(sub, selection.at(sub.id));
    std::map<int, Span> by_emitter;
    for (auto& g : cand.circuit.gates)
      for (int q : {g.q0, g.q1}) {
        if (q < cand.circuit.photons) continue;
        Rat end = g.t + hw.duration_of(g.kind);
        auto it = by_emitter.find(q);
        if (it == by_emitter.end())
          by_emitter[q] = {g.t, end, false};
        else {
          if (g.t < it->second.start) it->second.start = g.t;
          if (end > it->second.end) it->second.end = end;
        }
      }
    for (auto& h : cand.held) by_emitter.at(h.emitter).open = true;
    std::vector<Span> eff;
    for (auto& [e, s] : by_emitter) eff.push_back(s);
    UsageCurve cand_curve = curve_from_spans(eff, cand.duration);
    Rat offset = alap_insert(plan, cand_curve, Rat(0));
    plan.total_usage = merge_curves(plan.total_usage, cand_curve, offset);
    plan.placements.push_back({sub.id, selection.at(sub.id), offset});
  }

  // Normalize to start at zero.
  Rat shift(0);
  if (!plan.total_usage.pts.empty())
    shift = -plan.total_usage.pts.front().first;
  for (auto& e : plan.placements) e.offset += shift;
  {
    UsageCurve shifted;
    shifted.duration = plan.total_usage.duration + shift;
    for (auto& [t, l] : plan.total_usage.pts)
      shifted.pts.emplace_back(t + shift, l);
    plan.total_usage = std::move(shifted);
  }

  // Assemble gates with global photon ids and per-(subgraph, emitter) spans.
  std::vector<Gate> all_gates;
  all_gates.reserve(256);
  std::map<std::pair<int, int>, std::pair<Rat, Rat>> span_of;  // key -> span

  Rat internal_end(0);
  std::map<int, const SubgraphInput*> by_id;
  for (auto& s : subs) by_id[s.id] = &s;

  for (auto& entry : plan.placements) {
    const SubgraphInput& sub = *by_id.at(entry.subgraph);
    auto& cand = variant_of(sub, entry.variant);
    for (auto& g : cand.circuit.gates) {
      Gate out = g;
      out.t = g.t + entry.offset;
      auto remap = [&](int q) {
        if (q < 0) return q;
        if (q < cand.circuit.photons) return sub.vertices[q];
        return -(1000000 + entry.subgraph * 1000 +
                 (q - cand.circuit.photons));  // placeholder emitter token
      };
      out.q0 = remap(g.q0);
      out.q1 = remap(g.q1);
      if (out.corr) out.corr->target = remap(out.corr->target);
      all_gates.push_back(out);
      for (int q : {g.q0, g.q1}) {
        if (q < cand.circuit.photons) continue;
        auto key = std::make_pair(entry.subgraph, q - cand.circuit.photons);
        Rat end = g.t + entry.offset + hw.duration_of(g.kind);
        auto it = span_of.find(key);
        if (it == span_of.end())
          span_of[key] = {g.t + entry.offset, end};
        else {
          if (g.t + entry.offset < it->second.first)
            it->second.first = g.t + entry.offset;
          if (end > it->second.second) it->second.second = end;
        }
      }
      Rat gend = out.t + hw.duration_of(out.kind);
      if (gend > internal_end) internal_end = gend;
    }
  }

  // Stem phase: one CZ complex per cut edge, ASAP from the internal end,
  // then the deferred transfers.
  std::map<int, std::pair<int, int>> host_of;  // global vertex -> (sub, local emitter)
  std::map<int, Clifford1> pending_of;
  for (auto& entry : plan.placements) {
    const SubgraphInput& sub = *by_id.at(entry.subgraph);
    auto& cand = variant_of(sub, entry.variant);
    for (auto& h : cand.held) {
      int global = sub.vertices[h.photon];
      host_of[global] = {entry.subgraph,
                         h.emitter - cand.circuit.photons};
      pending_of[global] = h.pending;
    }
  }
  std::map<std::pair<int, int>, Rat> ready;  // emitter key -> free from
  for (auto& [key, span] : span_of) ready[key] = span.second;
  auto bump = [&](const std::pair<int, int>& key, Rat t, Rat dur) {
    ready[key] = t + dur;
    span_of[key].second = std::max(span_of[key].second, t + dur);
  };

  auto stems = stem_edges;
  std::sort(stems.begin(), stems.end());
  for (auto& [u, v] : stems) {
    auto hu = host_of.find(u), hv = host_of.find(v);
    if (hu == host_of.end() || hv == host_of.end())
      throw std::logic_error("combine: stem endpoint not held");
    auto ku = hu->second, kv = hv->second;
    Rat t0 = std::max({internal_end, ready[ku], ready[kv]});
    // H(t) CNOT H(t), target = the second endpoint's emitter
    Gate h1 = Gate::clifford(Clifford1::H(), 0);
    h1.q0 = -(1000000 + kv.first * 1000 + kv.second);
    h1.t = t0;
    all_gates.push_back(h1);
    bump(kv, t0, hw.t_1q);
    Rat t1 = t0 + hw.t_1q;
    Gate cn = Gate::ee_cnot(-(1000000 + ku.first * 1000 + ku.second),
                            -(1000000 + kv.first * 1000 + kv.second));
    cn.t = std::max(t1, ready[ku]);
    all_gates.push_back(cn);
    Rat cn_end = cn.t + hw.t_ee_cnot;
    bump(ku, cn.t, hw.t_ee_cnot);
    bump(kv, cn.t, hw.t_ee_cnot);
    Gate h2 = h1;
    h2.t = cn_end;
    all_gates.push_back(h2);
    bump(kv, cn_end, hw.t_1q);
  }
  // Deferred transfers, by global vertex id.
  std::vector<int> held_vertices;
  for (auto& [g, key] : host_of) held_vertices.push_back(g);
  std::sort(held_vertices.begin(), held_vertices.end());
  for (int u : held_vertices) {
    auto key = host_of[u];
    Clifford1 w = pending_of[u];
    Rat t = ready[key];
    Gate em = Gate::emission(-(1000000 + key.first * 1000 + key.second), u);
    em.t = t;
    all_gates.push_back(em);
    bump(key, t, hw.t_emission);
    Rat tp = t + hw.t_emission;
    Clifford1 dress = w.compose(Clifford1::H());
    if (!dress.is_identity()) {
      Gate d = Gate::clifford(dress, u);
      d.t = tp;
      all_gates.push_back(d);
      tp += hw.t_1q;
      ready[key] = std::max(ready[key], tp);
    }
    bool neg = false;
    std::uint8_t corr_p = w.conj_pauli(2, neg);
    Gate mx = Gate::measure_x(-(1000000 + key.first * 1000 + key.second),
                              Correction{corr_p, u});
    mx.t = std::max(ready[key], tp);
    all_gates.push_back(mx);
    bump(key, mx.t, hw.t_measure);
  }

  // Physical emitter assignment: greedy interval coloring by start time.
  std::vector<std::pair<std::pair<int, int>, std::pair<Rat, Rat>>> intervals(
      span_of.begin(), span_of.end());
  std::sort(intervals.begin(), intervals.end(),
            [](auto& a, auto& b) {
              if (a.second.first != b.second.first)
                return a.second.first < b.second.first;
              return a.first < b.first;
            });
  std::map<std::pair<int, int>, int> physical;
  std::vector<Rat> free_at;
  for (auto& [key, span] : intervals) {
    int chosen = -1;
    for (int e = 0; e < (int)free_at.size(); ++e)
      if (free_at[e] <= span.first) { chosen = e; break; }
    if (chosen < 0) {
      chosen = (int)free_at.size();
      free_at.push_back(Rat(0));
    }
    free_at[chosen] = span.second;
    physical[key] = chosen;
  }
  if ((int)free_at.size() > ne_limit)
    throw std::logic_error("combine: emitter coloring exceeded the cap");
  plan.emitter_map = physical;

  // Rewrite placeholder emitter tokens into physical qubit ids.
  Circuit out;
  out.photons = total_photons;
  out.emitters = (int)free_at.size();
  auto resolve = [&](int q) {
    if (q >= -999999) return q;
    int token = -q - 1000000;
    int sg = token / 1000, local = token % 1000;
    return total_photons + physical.at({sg, local});
  };
  for (auto& g : all_gates) {
    Gate gg = g;
    gg.q0 = resolve(g.q0);
    gg.q1 = resolve(g.q1);
    if (gg.corr) gg.corr->target = resolve(gg.corr->target);
    out.gates.push_back(gg);
  }
  out.sort_gates();
  Materialized m;
  // Everything slides as late as its dependencies allow: photons spend the
  // least possible time emitted, the makespan does not move, and usage can
  // never exceed the number of physical emitters.
  m.circuit = alap_retime(std::move(out), hw);
  plan.duration = circuit_end_time(m.circuit, hw);
  plan.total_usage = usage_curve(m.circuit, hw);
  m.plan = std::move(plan);
  return m;
}

std::map<int, int> base_selection(const std::vector<SubgraphInput>& subs,
                                  int ne_limit) {
  std::map<int, int> sel;
  for (auto& s : subs) {
    if (s.vertices.empty()) continue;
    if (s.flex.ne_min > ne_limit)
      throw std::runtime_error("combine: subgraph " + std::to_string(s.id) +
                               " needs " + std::to_string(s.flex.ne_min) +
                               " emitters, over the cap " +
                               std::to_string(ne_limit));
    sel[s.id] = s.flex.ne_min;
  }
  return sel;
}

}  // namespace

CombineResult combine(const std::vector<SubgraphInput>& subs,
                      const std::vector<std::pair<int, int>>& stem_edges,
                      int total_photons, int ne_limit,
                      const HardwareModel& hw) {
  auto sel = base_selection(subs, ne_limit);
  Materialized m = materialize(subs, sel, stem_edges, total_photons, ne_limit, hw);
  CombineResult out;
  out.circuit = std::move(m.circuit);
  out.plan = std::move(m.plan);
  return relax_and_fill(out, subs, stem_edges, total_photons, ne_limit, hw);
}

CombineResult relax_and_fill(const CombineResult& base,
                             const std::vector<SubgraphInput>& subs,
                             const std::vector<std::pair<int, int>>& stem_edges,
                             int total_photons, int ne_limit,
                             const HardwareModel& hw) {
  CombineResult best = base;
  std::map<int, int> sel;
  for (auto& e : best.plan.placements) sel[e.subgraph] = e.variant;
  bool improved = true;
  int guard = 0;
  while (improved && guard++ < 16) {
    improved = false;
    for (auto& s : subs) {
      if (s.vertices.empty()) continue;
      int cur = sel[s.id];
      for (int next = cur + 1; next <= s.flex.ne_min + 2; ++next) {
        if (!s.flex.variants.count(next)) continue;
        if (variant_of(s, next).ne_used > ne_limit) continue;
        std::map<int, int> trial = sel;
        trial[s.id] = next;
        Materialized m;
        try {
          m = materialize(subs, trial, stem_edges, total_photons, ne_limit, hw);
        } catch (const std::runtime_error&) {
          continue;  // upgraded curve no longer fits
        }
        if (m.plan.duration < best.plan.duration) {
          best.circuit = std::move(m.circuit);
          best.plan = std::move(m.plan);
          sel = trial;
          improved = true;
          best.notes.push_back("subgraph " + std::to_string(s.id) +
                               " relaxed to ne_limit " + std::to_string(next));
          break;
        }
      }
    }
  }
  return best;
}

}  // namespace emitforge

#include "emitforge/reduction.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace emitforge {

std::string to_string(const ReversedOp& op) {
  std::ostringstream os;
  switch (op.kind) {
    case ReversedOpKind::SwapWithFreeEmitter:
      os << (op.hold ? "hold" : "swap") << "(p" << op.a << "->e" << op.b << ")";
      break;
    case ReversedOpKind::PhotonAbsorption:
      os << "absorb(e" << op.a << ",p" << op.b << ",pat"
         << (int)op.pattern << ",lc" << op.pre_lc << ")";
      break;
    case ReversedOpKind::EmitterDisentangle:
      os << "disentangle(e" << op.a << ",e" << op.b << ")";
      break;
  }
  return os.str();
}

ReductionState::ReductionState(const GraphState& target, int ne_limit)
    : graph_(target.num_vertices() + ne_limit),
      m_(target.num_vertices()),
      ne_limit_(ne_limit),
      free_(ne_limit),
      alive_(0),
      active_slot_(ne_limit, 0),
      held_slot_(ne_limit, 0),
      pending_(ne_limit, Clifford1::I()),
      held_photon_(ne_limit, -1) {
  if (ne_limit < 0) throw std::invalid_argument("reduction: negative budget");
  if (m_ > 63) throw std::invalid_argument("reduction: graph too large");
  for (auto& [u, v] : target.edges()) graph_.add_edge(u, v);
  for (int v = 0; v < m_; ++v) {
    graph_.set_tag(v, target.tag(v));
    alive_ |= 1ull << v;
  }
  for (int s = 0; s < ne_limit; ++s)
    graph_.set_role(m_ + s, Role::Emitter);
}

bool ReductionState::photon_alive(int p) const {
  return p >= 0 && p < m_ && ((alive_ >> p) & 1);
}

bool ReductionState::slot_active(int s) const {
  return s >= 0 && s < ne_limit_ && active_slot_[s];
}

bool ReductionState::slot_held(int s) const {
  return s >= 0 && s < ne_limit_ && held_slot_[s];
}

int ReductionState::alive_photon_count() const {
  return __builtin_popcountll(alive_);
}

bool ReductionState::is_terminal() const {
  if (alive_) return false;
  for (int s = 0; s < ne_limit_; ++s) {
    if (active_slot_[s] && !held_slot_[s]) return false;
    // Held emitters must end isolated: leftover edges between boundaries
    // would silently drop structure from the forward circuit.
    if (held_slot_[s] && graph_.degree(slot_vertex(s)) != 0) return false;
  }
  return true;
}

int ReductionState::qubit_of(int vertex) const { return vertex; }

bool ReductionState::pre_lc_allowed(int f) const {
  // An LC at f toggles pairs inside N(f); photons may never gain an edge to
  // another photon, so all photon pairs there must already be adjacent.
  auto nf = graph_.neighborhood(f);
  for (size_t i = 0; i < nf.size(); ++i) {
    if (nf[i] >= m_ || !photon_alive(nf[i])) continue;
    for (size_t j = i + 1; j < nf.size(); ++j) {
      if (nf[j] >= m_ || !photon_alive(nf[j])) continue;
      if (!graph_.has_edge(nf[i], nf[j])) return false;
    }
  }
  return true;
}

bool ReductionState::pattern_applies(const GraphState& g, int ev, int p,
                                     AbsorbPattern pat) const {
  if (!g.has_edge(ev, p)) return false;
  auto np = g.neighborhood(p);
  auto ne = g.neighborhood(ev);
  switch (pat) {
    case AbsorbPattern::Pendant:
      return np.size() == 1;  // np = {ev} given the edge
    case AbsorbPattern::Twin: {
      if (np.size() == 1 || ne.size() == 1) return false;
      std::vector<int> ps, es;
      for (int u : np) if (u != ev) ps.push_back(u);
      for (int u : ne) if (u != p) es.push_back(u);
      return ps == es;
    }
    case AbsorbPattern::EmitterPendant:
      return ne.size() == 1 && np.size() > 1;
  }
  return false;
}

std::vector<ReversedOp> ReductionState::applicable_ops() const {
  std::vector<ReversedOp> ops;
  // Swaps, by photon id, onto the lowest free slot.
  int target_slot = -1;
  for (int s = 0; s < ne_limit_; ++s)
    if (!active_slot_[s]) { target_slot = s; break; }
  if (target_slot >= 0) {
    for (int p = 0; p < m_; ++p)
      if (photon_alive(p))
        ops.push_back({ReversedOpKind::SwapWithFreeEmitter, p,
                       slot_vertex(target_slot)});
  }
  // Absorptions by (emitter, photon, dressing), plain patterns first.
  for (int s = 0; s < ne_limit_; ++s) {
    if (!active_slot_[s]) continue;
    int ev = slot_vertex(s);
    for (int p : graph_.neighborhood(ev)) {
      if (p >= m_ || !photon_alive(p)) continue;
      for (auto pat : {AbsorbPattern::Pendant, AbsorbPattern::Twin,
                       AbsorbPattern::EmitterPendant}) {
        if (pattern_applies(graph_, ev, p, pat)) {
          ops.push_back({ReversedOpKind::PhotonAbsorption, ev, p, pat});
          break;
        }
      }
    }
  }
  // Pre-LC variants: one LC at an active emitter f, patterns re-read on the
  // rewritten graph. Only pairs the LC can affect are scanned.
  for (int fs = 0; fs < ne_limit_; ++fs) {
    if (!active_slot_[fs]) continue;
    int f = slot_vertex(fs);
    if (!pre_lc_allowed(f)) continue;
    GraphState scratch = graph_;
    scratch.apply_local_complementation(f);
    for (int s = 0; s < ne_limit_; ++s) {
      if (!active_slot_[s]) continue;
      int ev = slot_vertex(s);
      for (int p : scratch.neighborhood(ev)) {
        if (p >= m_ || !photon_alive(p)) continue;
        if (f != ev && !graph_.has_edge(f, p) && !graph_.has_edge(f, ev))
          continue;
        for (auto pat : {AbsorbPattern::Pendant, AbsorbPattern::Twin,
                         AbsorbPattern::EmitterPendant}) {
          if (pattern_applies(scratch, ev, p, pat)) {
            ops.push_back({ReversedOpKind::PhotonAbsorption, ev, p, pat, f});
            break;
          }
        }
      }
    }
  }
  // Disentangles by slot pair.
  for (int s1 = 0; s1 < ne_limit_; ++s1) {
    if (!active_slot_[s1]) continue;
    for (int s2 = s1 + 1; s2 < ne_limit_; ++s2) {
      if (!active_slot_[s2]) continue;
      if (graph_.has_edge(slot_vertex(s1), slot_vertex(s2)))
        ops.push_back({ReversedOpKind::EmitterDisentangle, slot_vertex(s1),
                       slot_vertex(s2)});
    }
  }
  return ops;
}

bool ReductionState::is_absorbable(int emitter_vertex, int photon) const {
  if (emitter_vertex < m_ || emitter_vertex >= m_ + ne_limit_ ||
      !slot_active(emitter_vertex - m_))
    throw std::invalid_argument("is_absorbable: not an active emitter");
  if (photon < 0 || photon >= m_ || !photon_alive(photon))
    throw std::invalid_argument("is_absorbable: not a live photon");
  for (auto& op : applicable_ops())
    if (op.kind == ReversedOpKind::PhotonAbsorption &&
        op.a == emitter_vertex && op.b == photon)
      return true;
  return false;
}

void ReductionState::push_fwd(std::vector<Gate> execution_order) {
  for (auto it = execution_order.rbegin(); it != execution_order.rend(); ++it)
    rev_log_.push_back(*it);
}

void ReductionState::flush_tag_gate(std::vector<Gate>& fwd, int vertex,
                                    int qubit) {
  Clifford1 c = graph_.tag(vertex);
  if (!c.is_identity()) fwd.push_back(Gate::clifford(c, qubit));
  graph_.set_tag(vertex, Clifford1::I());
}

void ReductionState::apply_op(const ReversedOp& op) {
  std::vector<Gate> fwd;  // execution order
  switch (op.kind) {
    case ReversedOpKind::SwapWithFreeEmitter: {
      int p = op.a, ev = op.b;
      int s = ev - m_;
      if (!photon_alive(p) || s < 0 || s >= ne_limit_ || active_slot_[s])
        throw std::invalid_argument("swap: inapplicable");
      // Vertex migrates from p to the slot.
      Clifford1 cp = graph_.tag(p);
      for (int u : graph_.neighborhood(p)) {
        graph_.remove_edge(p, u);
        graph_.add_edge(ev, u);
      }
      graph_.set_tag(p, Clifford1::I());
      graph_.set_tag(ev, Clifford1::I());
      alive_ &= ~(1ull << p);
      active_slot_[s] = 1;
      --free_;
      ++active_;
      peak_active_ = std::max(peak_active_, active_);
      max_slot_used_ = std::max(max_slot_used_, s);
      if (op.hold) {
        held_slot_[s] = 1;
        pending_[s] = cp;
        held_photon_[s] = p;
        // Transfer gates are deferred to the scheduler.
      } else {
        bool frees = graph_.degree(ev) == 0;
        if (frees) fwd.push_back(Gate::clifford(Clifford1::H(), qubit_of(ev)));
        fwd.push_back(Gate::emission(qubit_of(ev), p));
        Clifford1 dress = cp.compose(Clifford1::H());  // H first, then tag
        if (!dress.is_identity())
          fwd.push_back(Gate::clifford(dress, p));
        bool neg = false;
        std::uint8_t corr_p = cp.conj_pauli(2, neg);  // W Z W^dag, W = tag
        fwd.push_back(Gate::measure_x(qubit_of(ev), Correction{corr_p, p}));
        if (frees) {
          active_slot_[s] = 0;
          ++free_;
          --active_;
        }
      }
      break;
    }
    case ReversedOpKind::PhotonAbsorption: {
      int ev = op.a, p = op.b;
      int s = ev - m_;
      if (s < 0 || s >= ne_limit_ || !active_slot_[s] || !photon_alive(p))
        throw std::invalid_argument("absorb: inapplicable");
      if (op.pre_lc >= 0) {
        if (!pre_lc_allowed(op.pre_lc))
          throw std::invalid_argument("absorb: pre-LC would link photons");
        graph_.apply_local_complementation(op.pre_lc);
      }
      if (!pattern_applies(graph_, ev, p, op.pattern))
        throw std::invalid_argument("absorb: pattern does not apply");
      bool cleanup = false;
      switch (op.pattern) {
        case AbsorbPattern::Pendant:
          break;
        case AbsorbPattern::Twin:
          graph_.apply_local_complementation(ev);
          cleanup = true;
          break;
        case AbsorbPattern::EmitterPendant:
          graph_.apply_local_complementation(p);
          graph_.apply_local_complementation(ev);
          break;
      }
      if (graph_.degree(p) != 1 || !graph_.has_edge(ev, p))
        throw std::logic_error("absorb: dressing failed to pin the photon");
      bool frees = graph_.degree(ev) == 1 && !held_slot_[s];
      if (frees) fwd.push_back(Gate::clifford(Clifford1::H(), qubit_of(ev)));
      fwd.push_back(Gate::emission(qubit_of(ev), p));
      flush_tag_gate(fwd, p, p);
      flush_tag_gate(fwd, ev, qubit_of(ev));
      graph_.remove_edge(ev, p);
      alive_ &= ~(1ull << p);
      if (cleanup) graph_.apply_local_complementation(ev);
      if (frees) {
        if (graph_.degree(ev) != 0)
          throw std::logic_error("absorb: free bookkeeping");
        active_slot_[s] = 0;
        ++free_;
        --active_;
      }
      break;
    }
    case ReversedOpKind::EmitterDisentangle: {
      int e1 = op.a, e2 = op.b;
      int s1 = e1 - m_, s2 = e2 - m_;
      if (s1 < 0 || s2 < 0 || s1 >= ne_limit_ || s2 >= ne_limit_ ||
          !active_slot_[s1] || !active_slot_[s2] || !graph_.has_edge(e1, e2))
        throw std::invalid_argument("disentangle: inapplicable");
      bool free1 = graph_.degree(e1) == 1 && !held_slot_[s1];
      bool free2 = graph_.degree(e2) == 1 && !held_slot_[s2];
      if (free1) fwd.push_back(Gate::clifford(Clifford1::H(), qubit_of(e1)));
      if (free2) fwd.push_back(Gate::clifford(Clifford1::H(), qubit_of(e2)));
      // Forward CZ realized as H(t) CNOT(c,t) H(t).
      fwd.push_back(Gate::clifford(Clifford1::H(), qubit_of(e2)));
      fwd.push_back(Gate::ee_cnot(qubit_of(e1), qubit_of(e2)));
      fwd.push_back(Gate::clifford(Clifford1::H(), qubit_of(e2)));
      flush_tag_gate(fwd, e1, qubit_of(e1));
      flush_tag_gate(fwd, e2, qubit_of(e2));
      graph_.remove_edge(e1, e2);
      ++disentangles_;
      for (auto [s, fr] : {std::pair{s1, free1}, std::pair{s2, free2}}) {
        if (!fr) continue;
        active_slot_[s] = 0;
        ++free_;
        --active_;
      }
      break;
    }
  }
  history_.push_back(op);
  push_fwd(std::move(fwd));
}

std::string ReductionState::state_key() const {
  std::string key;
  key.reserve(8 + (size_t)(m_ + ne_limit_) * 8 + ne_limit_ + 2);
  auto put64 = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) key.push_back((char)((v >> (8 * i)) & 0xff));
  };
  put64(alive_);
  int total = m_ + ne_limit_;
  for (int v = 0; v < total; ++v)
    for (int w = 0; w < graph_.words(); ++w) put64(graph_.row(v)[w]);
  for (int s = 0; s < ne_limit_; ++s)
    key.push_back((char)(active_slot_[s] | (held_slot_[s] << 1)));
  return key;
}

ReductionState::Reduced ReductionState::reverse_to_circuit() const {
  if (!is_terminal())
    throw std::invalid_argument(
        "reverse_to_circuit: reduction history is incomplete");
  std::vector<Gate> log = rev_log_;
  // Held emitters open the circuit dressed as bare degree-0 vertices.
  for (int s = 0; s < ne_limit_; ++s) {
    if (!held_slot_[s]) continue;
    int ev = slot_vertex(s);
    Clifford1 c = graph_.tag(ev);
    if (!c.is_identity()) log.push_back(Gate::clifford(c, qubit_of(ev)));
    log.push_back(Gate::clifford(Clifford1::H(), qubit_of(ev)));
  }
  Reduced out;
  out.circuit.photons = m_;
  out.circuit.emitters = max_slot_used_ + 1;
  out.circuit.gates.assign(log.rbegin(), log.rend());
  for (int s = 0; s < ne_limit_; ++s)
    if (held_slot_[s])
      out.held.push_back({held_photon_[s], slot_vertex(s), pending_[s]});
  return out;
}

}  // namespace emitforge

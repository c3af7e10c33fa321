#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emitforge/circuit.hpp"
#include "emitforge/graph.hpp"

namespace emitforge {

enum class ReversedOpKind : std::uint8_t {
  SwapWithFreeEmitter,
  PhotonAbsorption,
  EmitterDisentangle,
};

// Absorption patterns, each a fixed local-Clifford dressing around the
// reversed emission:
//   Pendant       N(p) = {e}          plain reversed emission
//   Twin          edge + N(p)\{e} = N(e)\{p}   LC(e) sandwich
//   EmitterPendant N(e) = {p}         LC(p), LC(e), then reversed emission
// An optional pre-LC at an adjacent active emitter f widens the menu; it is
// only offered when it cannot create a photon-photon edge.
enum class AbsorbPattern : std::uint8_t { Pendant, Twin, EmitterPendant };

struct ReversedOp {
  ReversedOpKind kind;
  int a = -1;  // swap: photon; absorption: emitter vertex; disentangle: e1
  int b = -1;  // swap: emitter vertex; absorption: photon; disentangle: e2
  AbsorbPattern pattern = AbsorbPattern::Pendant;
  int pre_lc = -1;    // absorption only: vertex of the pre-LC dressing
  bool hold = false;  // swap only: keep the vertex on its emitter (boundary)
};

std::string to_string(const ReversedOp& op);

struct HeldVertex {
  int photon = -1;        // photon qubit id in the produced circuit
  int emitter = -1;       // emitter qubit id in the produced circuit
  Clifford1 pending;      // dressing realized by the deferred transfer
};

// Reduction state over a fixed register: photons [0, m), emitter slots
// [m, m + ne_limit). Reversed ops rewrite the graph and append the matching
// forward gates (in reverse chronological order) to the log.
class ReductionState {
 public:
  ReductionState(const GraphState& target, int ne_limit);

  int photon_count() const { return m_; }
  int ne_limit() const { return ne_limit_; }
  int free_emitters() const { return free_; }
  int active_emitters() const { return active_; }
  int peak_active() const { return peak_active_; }
  int disentangle_count() const { return disentangles_; }
  bool photon_alive(int p) const;
  bool slot_active(int s) const;
  bool slot_held(int s) const;
  int alive_photon_count() const;
  const GraphState& graph() const { return graph_; }
  const std::vector<ReversedOp>& history() const { return history_; }

  int slot_vertex(int s) const { return m_ + s; }

  bool is_terminal() const;  // no photons, no active non-held emitters

  std::vector<ReversedOp> applicable_ops() const;
  bool is_absorbable(int emitter_vertex, int photon) const;
  void apply_op(const ReversedOp& op);

  // Canonical key for search memoization (adjacency + liveness; tags are
  // irrelevant to applicability and cost).
  std::string state_key() const;

  // Terminal states only: reverses the log into a forward circuit. Held
  // vertices keep their emitters live; their transfers are emitted later by
  // the scheduler.
  struct Reduced {
    Circuit circuit;  // untimed
    std::vector<HeldVertex> held;
  };
  Reduced reverse_to_circuit() const;

 private:
  void push_fwd(std::vector<Gate> execution_order);
  void flush_tag_gate(std::vector<Gate>& fwd, int vertex, int qubit);
  bool pre_lc_allowed(int f) const;
  bool pattern_applies(const GraphState& g, int ev, int p,
                       AbsorbPattern pat) const;
  int qubit_of(int vertex) const;  // circuit qubit id for a graph vertex

  GraphState graph_;
  int m_;
  int ne_limit_;
  int free_;
  int active_ = 0;
  int peak_active_ = 0;
  int disentangles_ = 0;
  std::uint64_t alive_;
  std::vector<std::uint8_t> active_slot_;
  std::vector<std::uint8_t> held_slot_;
  std::vector<Clifford1> pending_;   // per slot, held dressing
  std::vector<int> held_photon_;    // per slot, original photon id
  int max_slot_used_ = -1;
  std::vector<ReversedOp> history_;
  std::vector<Gate> rev_log_;  // forward gates, reverse chronological
};

}  // namespace emitforge

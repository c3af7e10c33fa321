#pragma once

#include <optional>
#include <string>
#include <vector>

#include "emitforge/clifford1q.hpp"
#include "emitforge/rational.hpp"
#include "emitforge/tableau.hpp"

namespace emitforge {

struct HardwareModel;

enum class GateKind : std::uint8_t {
  EmitterInit,
  EmitterEmitterCnot,
  Emission,
  SingleQubitClifford,
  EmitterMeasureX,
};

const char* gate_kind_name(GateKind k);

// Pauli letters for classically controlled corrections: 0=X, 1=Y, 2=Z.
struct Correction {
  std::uint8_t pauli = 2;
  int target = -1;
};

struct Gate {
  GateKind kind;
  int q0 = -1;          // EmitterEmitterCnot: control; Emission: emitter
  int q1 = -1;          // EmitterEmitterCnot: target; Emission: photon
  Clifford1 g;          // SingleQubitClifford only
  std::optional<Correction> corr;  // EmitterMeasureX only
  Rat t;                // start time, tau_QD units

  static Gate init(int e) { return {GateKind::EmitterInit, e, -1, {}, {}, {}}; }
  static Gate ee_cnot(int c, int t2) {
    return {GateKind::EmitterEmitterCnot, c, t2, {}, {}, {}};
  }
  static Gate emission(int e, int p) {
    return {GateKind::Emission, e, p, {}, {}, {}};
  }
  static Gate clifford(Clifford1 c, int q) {
    return {GateKind::SingleQubitClifford, q, -1, c, {}, {}};
  }
  static Gate measure_x(int e, std::optional<Correction> c = {}) {
    return {GateKind::EmitterMeasureX, e, -1, {}, c, {}};
  }
};

// Qubit id space: photons are [0, photons), emitters [photons,
// photons + emitters). Gate times are rationals in tau_QD units.
//
// Semantics pinned for the deterministic scheme:
//  - Emission(e -> p) is CNOT(e -> p) on a fresh |0> photon followed by the
//    fixed H frame on the photon, so an isolated |+> emitter emits the
//    two-vertex graph state.
//  - EmitterMeasureX measures the emitter in the X basis, applies the
//    classically controlled Pauli correction to its target on outcome 1
//    (tracked as a zero-duration frame update), and re-initializes the
//    emitter to |0>.
struct Circuit {
  int photons = 0;
  int emitters = 0;
  std::vector<Gate> gates;

  int ee_cnot_count() const;
  bool is_photon(int q) const { return q >= 0 && q < photons; }
  bool is_emitter(int q) const { return q >= photons && q < photons + emitters; }
  // Sorts gates by (t, q0, q1); ties act on disjoint qubits.
  void sort_gates();
};

struct Violation {
  std::string rule;
  std::string detail;
};

// Structural checks: per-qubit interval exclusivity, photon gate discipline
// (first and only entangling gate is its emission), operand roles, emitters
// finishing with a measure-out.
std::vector<Violation> validate(const Circuit& c, const HardwareModel& hw);

enum class OutcomePolicy { Seeded, ForceZero, ForceOne };

struct ReplayOptions {
  std::uint64_t seed = 1;
  OutcomePolicy policy = OutcomePolicy::Seeded;
};

struct ReplayResult {
  Tableau full;            // photons + emitters register
  std::vector<int> outcomes;
};

// Simulates the circuit on the stabilizer oracle. Throws if an emitter ends
// entangled or out of |0>. The full-register tableau keeps emitters in |0>.
ReplayResult replay(const Circuit& c, const HardwareModel& hw,
                    const ReplayOptions& opt = {});

// Photon-register tableau: replay then trace out each verified emitter.
Tableau replay_photons(const Circuit& c, const HardwareModel& hw,
                       const ReplayOptions& opt = {});

// JSON, version tag "emitforge-circuit/1"; gates sorted by (t, ids).
std::string serialize(const Circuit& c);
Circuit deserialize(const std::string& bytes);

}  // namespace emitforge

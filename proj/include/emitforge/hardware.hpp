#pragma once

#include <string>
#include <vector>

#include "emitforge/circuit.hpp"
#include "emitforge/rational.hpp"

namespace emitforge {

// Gate timing and loss model. Defaults follow the quantum-dot platform:
// tau_QD = 2 pi / J is the emitter-emitter CNOT period (1 ns at
// J = 2 pi x 1 GHz); emission runs at 0.1 tau_QD with cavity enhancement;
// measure-out and single-qubit gates default to the same 0.1 tau_QD since
// the platform leaves them unspecified; photons lose 0.5% per tau_QD.
struct HardwareModel {
  Rat tau_qd{1};
  Rat t_ee_cnot{1};
  Rat t_emission{1, 10};
  Rat t_1q{1, 10};
  Rat t_measure{1, 10};
  double loss_per_tau = 0.005;

  Rat duration_of(GateKind k) const;

  static HardwareModel qd_default() { return HardwareModel{}; }
  static HardwareModel preset(const std::string& name);
  static HardwareModel parse_file(const std::string& path);
  std::string describe() const;
};

// Assigns start times: every gate as early as its operands allow, in list
// order per qubit. Idempotent on consistently timed circuits.
Circuit time_circuit(Circuit c, const HardwareModel& hw);

// Post-pass: slides Emission gates (and the emitted photon's trailing
// single-qubit gates) as late as the emitter's next gate allows, without
// growing the makespan.
Circuit delay_emissions(Circuit c, const HardwareModel& hw);

// Retimes every gate as late as its successors allow while keeping the
// makespan and all per-qubit gate orders; photons end up emitted as late as
// the dependency structure permits.
Circuit alap_retime(Circuit c, const HardwareModel& hw);

Rat circuit_end_time(const Circuit& c, const HardwareModel& hw);

// Start time of each photon's Emission gate; loss accrues from there.
std::vector<Rat> emission_times(const Circuit& c);

struct Metrics {
  int n_ee_cnot = 0;
  Rat duration;
  Rat avg_t_loss;
  double survival = 1.0;              // product over photons
  std::vector<double> survival_per_photon;
  int emitters_used = 0;
};

Metrics metrics(const Circuit& c, const HardwareModel& hw);

}  // namespace emitforge

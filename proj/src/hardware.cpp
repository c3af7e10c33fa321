#include "emitforge/hardware.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace emitforge {

Rat HardwareModel::duration_of(GateKind k) const {
  switch (k) {
    case GateKind::EmitterInit: return t_1q;
    case GateKind::EmitterEmitterCnot: return t_ee_cnot;
    case GateKind::Emission: return t_emission;
    case GateKind::SingleQubitClifford: return t_1q;
    case GateKind::EmitterMeasureX: return t_measure;
  }
  return Rat(0);
}

HardwareModel HardwareModel::preset(const std::string& name) {
  if (name == "qd-default") return qd_default();
  throw std::invalid_argument("unknown hardware preset '" + name + "'");
}

HardwareModel HardwareModel::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open hardware profile " + path);
  HardwareModel hw;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (key == "tau_qd") hw.tau_qd = Rat::parse_decimal(val);
    else if (key == "t_ee_cnot") hw.t_ee_cnot = Rat::parse_decimal(val);
    else if (key == "t_emission") hw.t_emission = Rat::parse_decimal(val);
    else if (key == "t_1q") hw.t_1q = Rat::parse_decimal(val);
    else if (key == "t_measure") hw.t_measure = Rat::parse_decimal(val);
    else if (key == "loss_per_tau") hw.loss_per_tau = std::stod(val);
    else throw std::invalid_argument("hardware profile: unknown key " + key);
  }
  if (hw.loss_per_tau < 0 || hw.loss_per_tau >= 1)
    throw std::invalid_argument("hardware profile: loss_per_tau out of [0,1)");
  return hw;
}

std::string HardwareModel::describe() const {
  std::ostringstream os;
  os << "tau_qd=" << tau_qd.str() << " t_ee_cnot=" << t_ee_cnot.str()
     << " t_emission=" << t_emission.str() << " t_1q=" << t_1q.str()
     << " t_measure=" << t_measure.str() << " loss_per_tau=" << loss_per_tau;
  return os.str();
}

// Operands for ordering purposes; a measure's correction target is included
// so the conjugated Pauli stays on the dressed side of the measurement.
static std::vector<int> ordering_qubits(const Gate& g) {
  std::vector<int> qs{g.q0};
  if (g.q1 >= 0) qs.push_back(g.q1);
  if (g.corr && g.corr->target >= 0) qs.push_back(g.corr->target);
  return qs;
}

Circuit time_circuit(Circuit c, const HardwareModel& hw) {
  std::map<int, Rat> ready;  // qubit -> earliest free time
  for (auto& g : c.gates) {
    Rat start(0);
    for (int q : ordering_qubits(g)) {
      auto it = ready.find(q);
      if (it != ready.end() && it->second > start) start = it->second;
    }
    g.t = start;
    Rat end = start + hw.duration_of(g.kind);
    for (int q : ordering_qubits(g)) ready[q] = end;
  }
  return c;
}

Circuit delay_emissions(Circuit c, const HardwareModel& hw) {
  // Latest-possible start per qubit, sweeping backwards; only Emission gates
  // and the emitted photon's trailing single-qubit gates move.
  Rat end = circuit_end_time(c, hw);
  std::map<int, Rat> limit;  // qubit -> next gate's (possibly new) start
  auto lim = [&](int q) {
    auto it = limit.find(q);
    return it == limit.end() ? end : it->second;
  };
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    Gate& g = *it;
    Rat dur = hw.duration_of(g.kind);
    bool movable = g.kind == GateKind::Emission ||
                   (g.kind == GateKind::SingleQubitClifford &&
                    g.q0 < c.photons);
    if (movable) {
      Rat latest = lim(g.q0) - dur;
      if (g.q1 >= 0) {
        Rat other = lim(g.q1) - dur;
        if (other < latest) latest = other;
      }
      if (latest > g.t) g.t = latest;
    }
    for (int q : ordering_qubits(g)) limit[q] = std::min(lim(q), g.t);
  }
  c.sort_gates();
  return c;
}

Circuit alap_retime(Circuit c, const HardwareModel& hw) {
  Rat end = circuit_end_time(c, hw);
  c.sort_gates();
  std::map<int, Rat> limit;  // qubit -> start of its next gate
  auto lim = [&](int q) {
    auto it = limit.find(q);
    return it == limit.end() ? end : it->second;
  };
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    Gate& g = *it;
    Rat dur = hw.duration_of(g.kind);
    Rat latest = end - dur;
    for (int q : ordering_qubits(g)) latest = std::min(latest, lim(q) - dur);
    if (latest > g.t) g.t = latest;
    for (int q : ordering_qubits(g)) limit[q] = std::min(lim(q), g.t);
  }
  c.sort_gates();
  return c;
}

Rat circuit_end_time(const Circuit& c, const HardwareModel& hw) {
  Rat end(0);
  for (auto& g : c.gates) {
    Rat e = g.t + hw.duration_of(g.kind);
    if (e > end) end = e;
  }
  return end;
}

std::vector<Rat> emission_times(const Circuit& c) {
  std::vector<Rat> out(c.photons, Rat(-1));
  for (auto& g : c.gates)
    if (g.kind == GateKind::Emission) out[g.q1] = g.t;
  for (int p = 0; p < c.photons; ++p)
    if (out[p] < Rat(0))
      throw std::invalid_argument("photon " + std::to_string(p) +
                                  " is never emitted");
  return out;
}

Metrics metrics(const Circuit& c, const HardwareModel& hw) {
  Metrics m;
  m.n_ee_cnot = c.ee_cnot_count();
  m.duration = circuit_end_time(c, hw);
  auto emits = emission_times(c);
  Rat total(0);
  for (auto& t : emits) total += m.duration - t;
  m.avg_t_loss = c.photons ? total / Rat(c.photons) : Rat(0);
  m.survival = 1.0;
  for (auto& t : emits) {
    double alive = (m.duration - t).to_double() / hw.tau_qd.to_double();
    double s = std::pow(1.0 - hw.loss_per_tau, alive);
    m.survival_per_photon.push_back(s);
    m.survival *= s;
  }
  std::vector<bool> used(c.emitters, false);
  for (auto& g : c.gates)
    for (int q : {g.q0, g.q1})
      if (q >= c.photons && q < c.photons + c.emitters) used[q - c.photons] = true;
  for (bool b : used) m.emitters_used += b;
  return m;
}

}  // namespace emitforge

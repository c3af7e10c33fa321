#include "emitforge/circuit.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "emitforge/hardware.hpp"
#include "json.hpp"

namespace emitforge {

const char* gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::EmitterInit: return "EmitterInit";
    case GateKind::EmitterEmitterCnot: return "EmitterEmitterCNOT";
    case GateKind::Emission: return "Emission";
    case GateKind::SingleQubitClifford: return "SingleQubitClifford";
    case GateKind::EmitterMeasureX: return "EmitterMeasureX";
  }
  return "?";
}

static GateKind gate_kind_from_name(const std::string& s) {
  if (s == "EmitterInit") return GateKind::EmitterInit;
  if (s == "EmitterEmitterCNOT") return GateKind::EmitterEmitterCnot;
  if (s == "Emission") return GateKind::Emission;
  if (s == "SingleQubitClifford") return GateKind::SingleQubitClifford;
  if (s == "EmitterMeasureX") return GateKind::EmitterMeasureX;
  throw std::invalid_argument("circuit json: unknown gate kind '" + s + "'");
}

int Circuit::ee_cnot_count() const {
  int n = 0;
  for (auto& g : gates) n += g.kind == GateKind::EmitterEmitterCnot;
  return n;
}

void Circuit::sort_gates() {
  std::stable_sort(gates.begin(), gates.end(), [](const Gate& a, const Gate& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.q0 != b.q0) return a.q0 < b.q0;
    return a.q1 < b.q1;
  });
}

static std::vector<int> gate_qubits(const Gate& g) {
  if (g.q1 >= 0) return {g.q0, g.q1};
  return {g.q0};
}

std::vector<Violation> validate(const Circuit& c, const HardwareModel& hw) {
  std::vector<Violation> out;
  auto bad = [&](const std::string& rule, const std::string& detail) {
    out.push_back({rule, detail});
  };
  int nq = c.photons + c.emitters;
  // Per-qubit timelines in list order.
  std::vector<std::vector<const Gate*>> per_qubit(nq);
  for (auto& g : c.gates) {
    for (int q : gate_qubits(g)) {
      if (q < 0 || q >= nq) {
        bad("operands", "qubit id out of range");
        continue;
      }
      per_qubit[q].push_back(&g);
    }
    switch (g.kind) {
      case GateKind::EmitterEmitterCnot:
        if (!c.is_emitter(g.q0) || !c.is_emitter(g.q1) || g.q0 == g.q1)
          bad("rule4", "emitter-emitter CNOT operands must be two emitters");
        break;
      case GateKind::Emission:
        if (!c.is_emitter(g.q0) || !c.is_photon(g.q1))
          bad("rule3", "emission operands must be (emitter, photon)");
        break;
      case GateKind::EmitterInit:
      case GateKind::EmitterMeasureX:
        if (!c.is_emitter(g.q0))
          bad("operands", std::string(gate_kind_name(g.kind)) +
                              " must act on an emitter");
        break;
      case GateKind::SingleQubitClifford:
        break;
    }
  }
  // Interval exclusivity per qubit (corrections are frame updates, free).
  for (int q = 0; q < nq; ++q) {
    auto list = per_qubit[q];
    std::sort(list.begin(), list.end(), [](const Gate* a, const Gate* b) {
      return a->t < b->t;
    });
    for (size_t i = 0; i + 1 < list.size(); ++i) {
      Rat end = list[i]->t + hw.duration_of(list[i]->kind);
      if (list[i + 1]->t < end)
        bad("timing", "overlapping gates on qubit " + std::to_string(q));
    }
  }
  // Photon discipline: exactly one Emission, and it comes first.
  for (int p = 0; p < c.photons; ++p) {
    auto& list = per_qubit[p];
    if (list.empty()) {
      bad("rule3", "photon " + std::to_string(p) + " is never emitted");
      continue;
    }
    auto first = *std::min_element(
        list.begin(), list.end(),
        [](const Gate* a, const Gate* b) { return a->t < b->t; });
    if (first->kind != GateKind::Emission)
      bad("rule3", "first gate on photon " + std::to_string(p) +
                       " is not its emission");
    int emissions = 0;
    for (auto* g : list) {
      emissions += g->kind == GateKind::Emission;
      if (g->kind == GateKind::EmitterEmitterCnot ||
          g->kind == GateKind::EmitterMeasureX ||
          g->kind == GateKind::EmitterInit)
        bad("rule4", "photon " + std::to_string(p) +
                         " receives a non-photon gate");
    }
    if (emissions != 1)
      bad("rule3", "photon " + std::to_string(p) + " has " +
                       std::to_string(emissions) + " emissions");
  }
  // Rule 5, structural side: a used emitter's last gate is its measure-out.
  for (int e = c.photons; e < nq; ++e) {
    auto& list = per_qubit[e];
    if (list.empty()) continue;
    auto last = *std::max_element(
        list.begin(), list.end(),
        [](const Gate* a, const Gate* b) { return a->t < b->t; });
    if (last->kind != GateKind::EmitterMeasureX &&
        last->kind != GateKind::EmitterInit)
      bad("rule5", "emitter " + std::to_string(e) +
                       " does not end measured or re-initialized");
  }
  return out;
}

ReplayResult replay(const Circuit& c, const HardwareModel& hw,
                    const ReplayOptions& opt) {
  auto violations = validate(c, hw);
  if (!violations.empty())
    throw std::invalid_argument("replay: invalid circuit: " +
                                violations.front().rule + ": " +
                                violations.front().detail);
  int nq = c.photons + c.emitters;
  if (nq == 0) throw std::invalid_argument("replay: empty register");
  Circuit sorted = c;
  sorted.sort_gates();
  Tableau t(nq);
  Prng rng(opt.seed);
  ReplayResult res{std::move(t), {}};
  for (auto& g : sorted.gates) {
    switch (g.kind) {
      case GateKind::EmitterInit: {
        // Initialization assumes a disentangled emitter; anything else is a
        // compilation bug worth failing loudly on.
        auto m = res.full.measure_z(g.q0, std::nullopt, rng);
        if (!m.deterministic)
          throw std::runtime_error("replay: emitter " + std::to_string(g.q0) +
                                   " re-initialized while entangled");
        if (m.outcome) res.full.apply_x(g.q0);
        break;
      }
      case GateKind::Emission:
        res.full.apply_cnot(g.q0, g.q1);
        res.full.apply_h(g.q1);
        break;
      case GateKind::EmitterEmitterCnot:
        res.full.apply_cnot(g.q0, g.q1);
        break;
      case GateKind::SingleQubitClifford:
        res.full.apply_clifford1(g.g, g.q0);
        break;
      case GateKind::EmitterMeasureX: {
        res.full.apply_h(g.q0);
        std::optional<int> forced;
        if (opt.policy == OutcomePolicy::ForceZero) forced = 0;
        if (opt.policy == OutcomePolicy::ForceOne) forced = 1;
        auto m = res.full.measure_z(g.q0, forced, rng);
        res.outcomes.push_back(m.outcome);
        if (m.outcome) {
          if (g.corr) {
            switch (g.corr->pauli) {
              case 0: res.full.apply_x(g.corr->target); break;
              case 1: res.full.apply_y(g.corr->target); break;
              case 2: res.full.apply_z(g.corr->target); break;
              default:
                throw std::invalid_argument("replay: bad correction pauli");
            }
          }
          res.full.apply_x(g.q0);  // re-initialize to |0>
        }
        break;
      }
    }
  }
  for (int e = c.photons; e < nq; ++e) {
    if (!res.full.stabilizes_plus_z(e))
      throw std::runtime_error("replay: emitter " + std::to_string(e) +
                               " finished entangled or out of |0>");
  }
  return res;
}

Tableau replay_photons(const Circuit& c, const HardwareModel& hw,
                       const ReplayOptions& opt) {
  ReplayResult r = replay(c, hw, opt);
  Tableau t = std::move(r.full);
  for (int e = c.photons + c.emitters - 1; e >= c.photons; --e)
    t = t.trace_out_zero_qubit(e);
  return t;
}

static const char* kVersion = "emitforge-circuit/1";

std::string serialize(const Circuit& c) {
  Circuit sorted = c;
  sorted.sort_gates();
  nlohmann::json j;
  j["version"] = kVersion;
  j["emitters"] = sorted.emitters;
  j["photons"] = sorted.photons;
  nlohmann::json arr = nlohmann::json::array();
  for (auto& g : sorted.gates) {
    nlohmann::json e;
    e["kind"] = gate_kind_name(g.kind);
    nlohmann::json q = nlohmann::json::array();
    q.push_back(g.q0);
    if (g.q1 >= 0) q.push_back(g.q1);
    e["q"] = q;
    e["t"] = g.t.str();
    if (g.kind == GateKind::SingleQubitClifford) e["g"] = (int)g.g.index();
    if (g.corr) {
      static const char* pl = "XYZ";
      e["corr"] = {{"pauli", std::string(1, pl[g.corr->pauli])},
                   {"target", g.corr->target}};
    }
    arr.push_back(e);
  }
  j["gates"] = arr;
  return j.dump();
}

Circuit deserialize(const std::string& bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("circuit json: parse error at byte " +
                                std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.contains("version") || !j["version"].is_string())
    throw std::invalid_argument("circuit json: missing version");
  if (j["version"].get<std::string>() != kVersion)
    throw std::invalid_argument("circuit json: unsupported version '" +
                                j["version"].get<std::string>() + "'");
  Circuit c;
  c.emitters = j.at("emitters").get<int>();
  c.photons = j.at("photons").get<int>();
  for (auto& e : j.at("gates")) {
    Gate g{};
    g.kind = gate_kind_from_name(e.at("kind").get<std::string>());
    auto& q = e.at("q");
    g.q0 = q.at(0).get<int>();
    g.q1 = q.size() > 1 ? q.at(1).get<int>() : -1;
    g.t = Rat::parse(e.at("t").get<std::string>());
    if (e.contains("g")) {
      int idx = e["g"].get<int>();
      if (idx < 0 || idx >= 24)
        throw std::invalid_argument("circuit json: clifford index range");
      g.g = Clifford1((std::uint8_t)idx);
    }
    if (e.contains("corr")) {
      Correction corr;
      std::string p = e["corr"].at("pauli").get<std::string>();
      if (p == "X") corr.pauli = 0;
      else if (p == "Y") corr.pauli = 1;
      else if (p == "Z") corr.pauli = 2;
      else throw std::invalid_argument("circuit json: bad correction pauli");
      corr.target = e["corr"].at("target").get<int>();
      g.corr = corr;
    }
    c.gates.push_back(g);
  }
  return c;
}

}  // namespace emitforge

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emitforge/clifford1q.hpp"
#include "emitforge/graph.hpp"

namespace emitforge {

// Deterministic RNG handle for measurement outcomes. A replay is a pure
// function of (circuit, seed, forced outcomes).
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  bool next_bit() { return next() >> 63; }
  std::uint64_t below(std::uint64_t k) { return k ? next() % k : 0; }
  double unit() { return (next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t s_;
};

struct MeasureResult {
  int outcome = 0;
  bool deterministic = false;
};

// CHP-style stabilizer tableau with destabilizer rows. Row Paulis are stored
// in XZ-form, P = i^r prod_q X_q^{x} Z_q^{z}, phases mod 4. Hermitian rows
// satisfy r == popcount(x & z) mod 2.
class Tableau {
 public:
  Tableau() : n_(0), words_(0) {}
  explicit Tableau(int n);  // |0...0>

  int num_qubits() const { return n_; }

  void apply_h(int q);
  void apply_s(int q);
  void apply_x(int q);
  void apply_z(int q);
  void apply_y(int q);
  void apply_cz(int a, int b);
  void apply_cnot(int c, int t);
  void apply_clifford1(Clifford1 c, int q);

  // Standard Z measurement. If the outcome is free, `forced` wins when set,
  // otherwise a bit is drawn from `rng`.
  MeasureResult measure_z(int q, std::optional<int> forced, Prng& rng);

  // True iff the stabilizer groups coincide, phases included.
  static bool states_equal(const Tableau& a, const Tableau& b);

  // Is +/-(pauli) with the given phase in the stabilizer group?
  // `x`,`z` index by qubit; r is the XZ-form phase (mod 4).
  bool contains(const std::vector<std::uint64_t>& x,
                const std::vector<std::uint64_t>& z, int r) const;

  // Removes qubit q, which must be stabilized by +Z_q (verified). The
  // returned tableau keeps only stabilizer rows (destabilizers dropped),
  // and further measurements are not supported on it.
  Tableau trace_out_zero_qubit(int q) const;
  bool stabilizes_plus_z(int q) const;
  bool has_destabilizers() const { return has_destab_; }

  // ASCII Pauli strings for diagnostics, stabilizer rows only.
  std::string dump() const;

  static Tableau from_graph(const GraphState& g);

  // Reverse direction: graph + per-qubit local Cliffords U with
  // U|G> having this tableau.
  std::pair<GraphState, std::vector<Clifford1>> extract_graph() const;

  // Debug-mode structural checks: rows commute, independent, Hermitian.
  bool well_formed() const;

 private:
  int rows() const { return has_destab_ ? 2 * n_ : n_; }
  int stab_begin() const { return has_destab_ ? n_ : 0; }
  bool xbit(int row, int q) const {
    return (x_[(size_t)row * words_ + q / 64] >> (q % 64)) & 1;
  }
  bool zbit(int row, int q) const {
    return (z_[(size_t)row * words_ + q / 64] >> (q % 64)) & 1;
  }
  void set_xbit(int row, int q, bool v);
  void set_zbit(int row, int q, bool v);
  // row_i := row_k * row_i  (left-multiply by row k)
  void rowmult(int i, int k);
  void rowcopy(int i, int k);
  void rowset_z(int i, int q, int phase);

  int n_;
  int words_;
  bool has_destab_ = true;
  std::vector<std::uint64_t> x_, z_;
  std::vector<std::uint8_t> r_;

  friend class TableauEchelon;
};

}  // namespace emitforge

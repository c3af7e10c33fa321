#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace emitforge {

// Single-qubit Clifford group, 24 elements up to global phase.
//
// An element is identified by its conjugation action on X and Z:
//   C X C^dag = (-1)^{sx} P_x,   C Z C^dag = (-1)^{sz} P_z
// with P_x != P_z drawn from {X, Y, Z}. Indices are frozen by the
// enumeration below and are the on-disk representation ("g" field of
// SingleQubitClifford gates), so the table must never be reordered.
//
// Pauli letters: 0 = X, 1 = Y, 2 = Z.
struct CliffordAction {
  std::uint8_t x_img;
  bool x_neg;
  std::uint8_t z_img;
  bool z_neg;
};

class Clifford1 {
 public:
  constexpr Clifford1() : idx_(0) {}
  constexpr explicit Clifford1(std::uint8_t idx) : idx_(idx) {}

  std::uint8_t index() const { return idx_; }
  bool is_identity() const { return idx_ == 0; }

  const CliffordAction& action() const;
  Clifford1 then(Clifford1 next) const;      // apply *this first, then next
  Clifford1 compose(Clifford1 first) const;  // apply `first` first, then *this
  Clifford1 inverse() const;

  // Conjugation of a local Pauli in XZ-form: P = i^r X^x Z^z at one qubit.
  // Returns the image bits and the phase increment (mod 4).
  void conj_xz(int x, int z, int& xo, int& zo, int& dr) const;

  // Conjugate a Pauli letter (0=X,1=Y,2=Z): returns letter, neg picks sign.
  std::uint8_t conj_pauli(std::uint8_t p, bool& neg) const;

  std::string name() const;

  friend bool operator==(Clifford1 a, Clifford1 b) { return a.idx_ == b.idx_; }
  friend bool operator!=(Clifford1 a, Clifford1 b) { return a.idx_ != b.idx_; }

  static Clifford1 from_action(const CliffordAction& a);

  // Common elements (resolved against the frozen table at first use).
  static Clifford1 I();
  static Clifford1 X();
  static Clifford1 Y();
  static Clifford1 Z();
  static Clifford1 H();
  static Clifford1 S();     // X -> Y,  Z -> Z
  static Clifford1 Sdg();   // X -> -Y, Z -> Z
  static Clifford1 SqrtX();    // exp(-i pi/4 X): X -> X, Z -> -Y
  static Clifford1 SqrtXdg();  // exp(+i pi/4 X): X -> X, Z -> Y

 private:
  std::uint8_t idx_;
};

}  // namespace emitforge

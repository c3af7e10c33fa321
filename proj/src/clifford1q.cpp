#include "emitforge/clifford1q.hpp"

#include <stdexcept>

namespace emitforge {
namespace {

// XZ-form of a Pauli letter: P = i^r X^x Z^z (Y = i X Z).
struct XZ {
  int x, z, r;
};

XZ letter_xz(std::uint8_t p, bool neg) {
  XZ v{};
  switch (p) {
    case 0: v = {1, 0, 0}; break;
    case 1: v = {1, 1, 1}; break;
    case 2: v = {0, 1, 0}; break;
    default: throw std::logic_error("bad pauli letter");
  }
  if (neg) v.r = (v.r + 2) & 3;
  return v;
}

// Product of two single-qubit XZ-form Paulis, a applied left of b.
XZ mul(XZ a, XZ b) {
  return {a.x ^ b.x, a.z ^ b.z, (a.r + b.r + 2 * (a.z & b.x)) & 3};
}

struct Tables {
  std::array<CliffordAction, 24> action;
  std::array<std::array<std::uint8_t, 24>, 24> compose;  // [second][first]
  std::array<std::uint8_t, 24> inverse;

  Tables() {
    // Frozen enumeration: (x_img, z_img) pairs ordered with identity first,
    // then signs (x_neg, z_neg) in binary order.
    const std::uint8_t pairs[6][2] = {{0, 2}, {0, 1}, {1, 0},
                                      {1, 2}, {2, 0}, {2, 1}};
    for (int p = 0; p < 6; ++p)
      for (int s = 0; s < 4; ++s)
        action[p * 4 + s] = {pairs[p][0], (s & 2) != 0, pairs[p][1],
                             (s & 1) != 0};

    for (int second = 0; second < 24; ++second) {
      for (int first = 0; first < 24; ++first) {
        // c = second * first (apply `first`, then `second`).
        CliffordAction img{};
        img.x_img = conj(second, action[first].x_img, action[first].x_neg,
                         img.x_neg);
        img.z_img = conj(second, action[first].z_img, action[first].z_neg,
                         img.z_neg);
        compose[second][first] = index_of(img);
      }
    }
    for (int i = 0; i < 24; ++i)
      for (int j = 0; j < 24; ++j)
        if (compose[i][j] == 0) inverse[i] = (std::uint8_t)j;
  }

  std::uint8_t conj(int c, std::uint8_t p, bool neg_in, bool& neg_out) const {
    const CliffordAction& a = action[c];
    XZ in = letter_xz(p, false);
    XZ ix = letter_xz(a.x_img, a.x_neg);
    XZ iz = letter_xz(a.z_img, a.z_neg);
    // image of i^r X^x Z^z = i^r (image X)^x (image Z)^z
    XZ out{0, 0, 0};
    if (in.x) out = mul(out, ix);
    if (in.z) out = mul(out, iz);
    out.r = (out.r + in.r) & 3;
    // Reconstruct letter + sign: out must be a plain Pauli letter.
    std::uint8_t letter;
    int base_r;
    if (out.x && out.z) { letter = 1; base_r = 1; }
    else if (out.x) { letter = 0; base_r = 0; }
    else if (out.z) { letter = 2; base_r = 0; }
    else throw std::logic_error("clifford image collapsed to identity");
    int extra = (out.r - base_r) & 3;
    // Y carries i already; leftover phase must be +/-1.
    if (extra != 0 && extra != 2)
      throw std::logic_error("clifford image has complex phase");
    neg_out = neg_in ^ (extra == 2);
    return letter;
  }

  std::uint8_t index_of(const CliffordAction& a) const {
    for (int i = 0; i < 24; ++i) {
      const CliffordAction& b = action[i];
      if (b.x_img == a.x_img && b.x_neg == a.x_neg && b.z_img == a.z_img &&
          b.z_neg == a.z_neg)
        return (std::uint8_t)i;
    }
    throw std::logic_error("clifford action not in table");
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

const CliffordAction& Clifford1::action() const {
  return tables().action[idx_];
}

Clifford1 Clifford1::then(Clifford1 next) const {
  return Clifford1(tables().compose[next.idx_][idx_]);
}

Clifford1 Clifford1::compose(Clifford1 first) const {
  return Clifford1(tables().compose[idx_][first.idx_]);
}

Clifford1 Clifford1::inverse() const {
  return Clifford1(tables().inverse[idx_]);
}

void Clifford1::conj_xz(int x, int z, int& xo, int& zo, int& dr) const {
  const CliffordAction& a = tables().action[idx_];
  XZ out{0, 0, 0};
  if (x) out = mul(out, letter_xz(a.x_img, a.x_neg));
  if (z) out = mul(out, letter_xz(a.z_img, a.z_neg));
  // Input X^x Z^z has r = 0 by convention; caller owns the row phase.
  xo = out.x;
  zo = out.z;
  dr = out.r;
  // Subtract the phase the input representation itself would carry: none,
  // inputs are plain X^x Z^z.
}

std::uint8_t Clifford1::conj_pauli(std::uint8_t p, bool& neg) const {
  bool n = false;
  std::uint8_t letter;
  const CliffordAction& a = tables().action[idx_];
  switch (p) {
    case 0: letter = a.x_img; n = a.x_neg; break;
    case 2: letter = a.z_img; n = a.z_neg; break;
    case 1: {
      // Y = i X Z
      XZ out = mul(letter_xz(a.x_img, a.x_neg), letter_xz(a.z_img, a.z_neg));
      out.r = (out.r + 1) & 3;
      if (out.x && out.z) { letter = 1; out.r = (out.r - 1) & 3; }
      else if (out.x) letter = 0;
      else letter = 2;
      n = out.r == 2;
      break;
    }
    default: throw std::logic_error("bad pauli letter");
  }
  neg ^= n;
  return letter;
}

Clifford1 Clifford1::from_action(const CliffordAction& a) {
  return Clifford1(tables().index_of(a));
}

std::string Clifford1::name() const {
  static const char* pl = "XYZ";
  const CliffordAction& a = action();
  std::string s = "c";
  s += std::to_string(idx_);
  s += "(X->";
  if (a.x_neg) s += '-';
  s += pl[a.x_img];
  s += ",Z->";
  if (a.z_neg) s += '-';
  s += pl[a.z_img];
  s += ')';
  return s;
}

Clifford1 Clifford1::I() { return from_action({0, false, 2, false}); }
Clifford1 Clifford1::X() { return from_action({0, false, 2, true}); }
Clifford1 Clifford1::Y() { return from_action({0, true, 2, true}); }
Clifford1 Clifford1::Z() { return from_action({0, true, 2, false}); }
Clifford1 Clifford1::H() { return from_action({2, false, 0, false}); }
Clifford1 Clifford1::S() { return from_action({1, false, 2, false}); }
Clifford1 Clifford1::Sdg() { return from_action({1, true, 2, false}); }
Clifford1 Clifford1::SqrtX() { return from_action({0, false, 1, true}); }
Clifford1 Clifford1::SqrtXdg() { return from_action({0, false, 1, false}); }

}  // namespace emitforge

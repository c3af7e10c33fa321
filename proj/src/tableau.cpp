#include "emitforge/tableau.hpp"

#include <algorithm>
#include <stdexcept>

namespace emitforge {

Tableau::Tableau(int n)
    : n_(n),
      words_((n + 63) / 64),
      x_((size_t)2 * n * ((n + 63) / 64), 0),
      z_((size_t)2 * n * ((n + 63) / 64), 0),
      r_(2 * n, 0) {
  if (n <= 0) throw std::invalid_argument("Tableau: non-positive size");
  for (int q = 0; q < n; ++q) {
    set_xbit(q, q, true);        // destabilizer X_q
    set_zbit(n + q, q, true);    // stabilizer Z_q
  }
}

void Tableau::set_xbit(int row, int q, bool v) {
  std::uint64_t m = 1ull << (q % 64);
  auto& w = x_[(size_t)row * words_ + q / 64];
  w = v ? (w | m) : (w & ~m);
}

void Tableau::set_zbit(int row, int q, bool v) {
  std::uint64_t m = 1ull << (q % 64);
  auto& w = z_[(size_t)row * words_ + q / 64];
  w = v ? (w | m) : (w & ~m);
}

void Tableau::rowmult(int i, int k) {
  // row_i := row_k * row_i ; phase picks up the Z_k X_i crossings.
  int cross = 0;
  for (int w = 0; w < words_; ++w)
    cross += __builtin_popcountll(z_[(size_t)k * words_ + w] &
                                  x_[(size_t)i * words_ + w]);
  r_[i] = (std::uint8_t)((r_[i] + r_[k] + 2 * cross) & 3);
  for (int w = 0; w < words_; ++w) {
    x_[(size_t)i * words_ + w] ^= x_[(size_t)k * words_ + w];
    z_[(size_t)i * words_ + w] ^= z_[(size_t)k * words_ + w];
  }
}

void Tableau::rowcopy(int i, int k) {
  for (int w = 0; w < words_; ++w) {
    x_[(size_t)i * words_ + w] = x_[(size_t)k * words_ + w];
    z_[(size_t)i * words_ + w] = z_[(size_t)k * words_ + w];
  }
  r_[i] = r_[k];
}

void Tableau::rowset_z(int i, int q, int phase) {
  for (int w = 0; w < words_; ++w) {
    x_[(size_t)i * words_ + w] = 0;
    z_[(size_t)i * words_ + w] = 0;
  }
  set_zbit(i, q, true);
  r_[i] = (std::uint8_t)(phase & 3);
}

void Tableau::apply_h(int q) {
  for (int i = 0; i < rows(); ++i) {
    bool x = xbit(i, q), z = zbit(i, q);
    if (x && z) r_[i] = (std::uint8_t)((r_[i] + 2) & 3);
    set_xbit(i, q, z);
    set_zbit(i, q, x);
  }
}

void Tableau::apply_s(int q) {
  for (int i = 0; i < rows(); ++i) {
    bool x = xbit(i, q);
    if (x) {
      set_zbit(i, q, !zbit(i, q));
      r_[i] = (std::uint8_t)((r_[i] + 1) & 3);
    }
  }
}

void Tableau::apply_x(int q) {
  for (int i = 0; i < rows(); ++i)
    if (zbit(i, q)) r_[i] = (std::uint8_t)((r_[i] + 2) & 3);
}

void Tableau::apply_z(int q) {
  for (int i = 0; i < rows(); ++i)
    if (xbit(i, q)) r_[i] = (std::uint8_t)((r_[i] + 2) & 3);
}

void Tableau::apply_y(int q) {
  for (int i = 0; i < rows(); ++i)
    if (xbit(i, q) != zbit(i, q)) r_[i] = (std::uint8_t)((r_[i] + 2) & 3);
}

void Tableau::apply_cz(int a, int b) {
  if (a == b) throw std::invalid_argument("cz: coincident qubits");
  if (a < 0 || a >= n_ || b < 0 || b >= n_)
    throw std::invalid_argument("cz: qubit out of range");
  for (int i = 0; i < rows(); ++i) {
    bool xa = xbit(i, a), xb = xbit(i, b);
    if (xa && xb) r_[i] = (std::uint8_t)((r_[i] + 2) & 3);
    if (xb) set_zbit(i, a, !zbit(i, a));
    if (xa) set_zbit(i, b, !zbit(i, b));
  }
}

void Tableau::apply_cnot(int c, int t) {
  if (c == t) throw std::invalid_argument("cnot: coincident qubits");
  if (c < 0 || c >= n_ || t < 0 || t >= n_)
    throw std::invalid_argument("cnot: qubit out of range");
  for (int i = 0; i < rows(); ++i) {
    if (xbit(i, c)) set_xbit(i, t, !xbit(i, t));
    if (zbit(i, t)) set_zbit(i, c, !zbit(i, c));
  }
}

void Tableau::apply_clifford1(Clifford1 c, int q) {
  if (c.is_identity()) return;
  for (int i = 0; i < rows(); ++i) {
    int x = xbit(i, q), z = zbit(i, q);
    if (!x && !z) continue;
    int xo, zo, dr;
    c.conj_xz(x, z, xo, zo, dr);
    set_xbit(i, q, xo);
    set_zbit(i, q, zo);
    r_[i] = (std::uint8_t)((r_[i] + dr) & 3);
  }
}

MeasureResult Tableau::measure_z(int q, std::optional<int> forced, Prng& rng) {
  if (!has_destab_)
    throw std::logic_error("measure_z: tableau has no destabilizers");
  if (q < 0 || q >= n_) throw std::invalid_argument("measure_z: bad qubit");
  int p = -1;
  for (int i = n_; i < 2 * n_; ++i)
    if (xbit(i, q)) { p = i; break; }
  if (p >= 0) {
    int m = forced.has_value() ? (*forced & 1) : (int)rng.next_bit();
    for (int i = 0; i < 2 * n_; ++i)
      if (i != p && xbit(i, q)) rowmult(i, p);
    rowcopy(p - n_, p);
    rowset_z(p, q, 2 * m);
    return {m, false};
  }
  // Deterministic: accumulate the product of stabilizers indicated by the
  // destabilizer rows that anticommute with Z_q.
  std::vector<std::uint64_t> sx(words_, 0), sz(words_, 0);
  int sr = 0;
  for (int i = 0; i < n_; ++i) {
    if (!xbit(i, q)) continue;
    int k = i + n_;
    int cross = 0;
    for (int w = 0; w < words_; ++w)
      cross += __builtin_popcountll(sz[w] & x_[(size_t)k * words_ + w]);
    sr = (sr + r_[k] + 2 * cross) & 3;
    for (int w = 0; w < words_; ++w) {
      sx[w] ^= x_[(size_t)k * words_ + w];
      sz[w] ^= z_[(size_t)k * words_ + w];
    }
  }
  if (sr != 0 && sr != 2) throw std::logic_error("measure_z: phase corrupt");
  return {sr == 2 ? 1 : 0, true};
}

namespace {

// Shared echelon form over stabilizer rows (x|z columns, phase-aware).
struct EchelonRow {
  std::vector<std::uint64_t> x, z;
  int r = 0;
};

struct Echelon {
  int n, words;
  std::vector<EchelonRow> rows;
  std::vector<int> pivot_col;  // per row, column index in [0, 2n)

  bool bit(const EchelonRow& row, int col) const {
    if (col < n) return (row.x[col / 64] >> (col % 64)) & 1;
    int q = col - n;
    return (row.z[q / 64] >> (q % 64)) & 1;
  }

  static void mul(EchelonRow& a, const EchelonRow& b, int words) {
    // a := b * a
    int cross = 0;
    for (int w = 0; w < words; ++w)
      cross += __builtin_popcountll(b.z[w] & a.x[w]);
    a.r = (a.r + b.r + 2 * cross) & 3;
    for (int w = 0; w < words; ++w) {
      a.x[w] ^= b.x[w];
      a.z[w] ^= b.z[w];
    }
  }

  void build() {
    int rank = 0;
    for (int col = 0; col < 2 * n && rank < (int)rows.size(); ++col) {
      int p = -1;
      for (int i = rank; i < (int)rows.size(); ++i)
        if (bit(rows[i], col)) { p = i; break; }
      if (p < 0) continue;
      std::swap(rows[rank], rows[p]);
      for (int i = 0; i < (int)rows.size(); ++i)
        if (i != rank && bit(rows[i], col)) mul(rows[i], rows[rank], words);
      pivot_col.push_back(col);
      ++rank;
    }
    rows.resize(rank);
  }

  // Reduce candidate against the echelon; true iff it lies in the group
  // with exact phase.
  bool reduces_to_identity(EchelonRow cand) const {
    for (size_t i = 0; i < rows.size(); ++i)
      if (bit(cand, pivot_col[i])) mul(cand, rows[i], words);
    for (int w = 0; w < words; ++w)
      if (cand.x[w] || cand.z[w]) return false;
    return cand.r == 0;
  }
};

}  // namespace

// Friend shim: builds an echelon form of a tableau's stabilizer rows.
class TableauEchelon {
 public:
  static Echelon build(const Tableau& t) {
    Echelon e;
    e.n = t.n_;
    e.words = t.words_;
    int sb = t.stab_begin();
    e.rows.resize(t.n_);
    for (int i = 0; i < t.n_; ++i) {
      e.rows[i].x.assign(t.x_.begin() + (size_t)(sb + i) * t.words_,
                         t.x_.begin() + (size_t)(sb + i + 1) * t.words_);
      e.rows[i].z.assign(t.z_.begin() + (size_t)(sb + i) * t.words_,
                         t.z_.begin() + (size_t)(sb + i + 1) * t.words_);
      e.rows[i].r = t.r_[sb + i];
    }
    e.build();
    return e;
  }
};

static Echelon make_echelon(const Tableau& t) { return TableauEchelon::build(t); }

bool Tableau::states_equal(const Tableau& a, const Tableau& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("states_equal: size mismatch");
  Echelon e = make_echelon(a);
  if ((int)e.rows.size() != a.num_qubits()) return false;
  int sb = b.stab_begin();
  for (int i = sb; i < sb + b.n_; ++i) {
    EchelonRow cand;
    cand.x.assign(b.x_.begin() + (size_t)i * b.words_,
                  b.x_.begin() + (size_t)(i + 1) * b.words_);
    cand.z.assign(b.z_.begin() + (size_t)i * b.words_,
                  b.z_.begin() + (size_t)(i + 1) * b.words_);
    cand.r = b.r_[i];
    if (!e.reduces_to_identity(std::move(cand))) return false;
  }
  return true;
}

bool Tableau::contains(const std::vector<std::uint64_t>& x,
                       const std::vector<std::uint64_t>& z, int r) const {
  Echelon e = make_echelon(*this);
  EchelonRow cand;
  cand.x = x;
  cand.z = z;
  cand.r = r & 3;
  return e.reduces_to_identity(std::move(cand));
}

bool Tableau::stabilizes_plus_z(int q) const {
  std::vector<std::uint64_t> x(words_, 0), z(words_, 0);
  z[q / 64] |= 1ull << (q % 64);
  return contains(x, z, 0);
}

Tableau Tableau::trace_out_zero_qubit(int q) const {
  if (!stabilizes_plus_z(q))
    throw std::runtime_error("trace_out: qubit " + std::to_string(q) +
                             " is not in |0>");
  if (n_ < 2) throw std::logic_error("trace_out: last qubit");
  // Work on stabilizer rows only.
  std::vector<EchelonRow> rows(n_);
  int sb = stab_begin();
  for (int i = 0; i < n_; ++i) {
    rows[i].x.assign(x_.begin() + (size_t)(sb + i) * words_,
                     x_.begin() + (size_t)(sb + i + 1) * words_);
    rows[i].z.assign(z_.begin() + (size_t)(sb + i) * words_,
                     z_.begin() + (size_t)(sb + i + 1) * words_);
    rows[i].r = r_[sb + i];
  }
  auto xb = [&](const EchelonRow& r2) {
    return (r2.x[q / 64] >> (q % 64)) & 1;
  };
  auto zb = [&](const EchelonRow& r2) {
    return (r2.z[q / 64] >> (q % 64)) & 1;
  };
  for (auto& r2 : rows)
    if (xb(r2)) throw std::logic_error("trace_out: X support on |0> qubit");
  // Collapse all z-support onto a single pivot row.
  int pivot = -1;
  for (int i = 0; i < n_; ++i) {
    if (!zb(rows[i])) continue;
    if (pivot < 0) { pivot = i; continue; }
    Echelon::mul(rows[i], rows[pivot], words_);
  }
  std::vector<EchelonRow> kept;
  for (int i = 0; i < n_; ++i)
    if (i != pivot) kept.push_back(rows[i]);
  // (If pivot exists it reduces to exactly +Z_q modulo the kept rows; the
  // membership check above already certified that.)
  Tableau out;
  out.n_ = n_ - 1;
  out.words_ = (out.n_ + 63) / 64;
  out.has_destab_ = false;
  out.x_.assign((size_t)out.n_ * out.words_, 0);
  out.z_.assign((size_t)out.n_ * out.words_, 0);
  out.r_.assign(out.n_, 0);
  if ((int)kept.size() != out.n_)
    throw std::logic_error("trace_out: rank bookkeeping failed");
  for (int i = 0; i < out.n_; ++i) {
    for (int col = 0, nc = 0; col < n_; ++col) {
      if (col == q) continue;
      bool xv = (kept[i].x[col / 64] >> (col % 64)) & 1;
      bool zv = (kept[i].z[col / 64] >> (col % 64)) & 1;
      if (xv) out.x_[(size_t)i * out.words_ + nc / 64] |= 1ull << (nc % 64);
      if (zv) out.z_[(size_t)i * out.words_ + nc / 64] |= 1ull << (nc % 64);
      ++nc;
    }
    out.r_[i] = (std::uint8_t)(kept[i].r & 3);
  }
  return out;
}

std::string Tableau::dump() const {
  static const char* letters = "IXZY";
  std::string s;
  int sb = stab_begin();
  for (int i = sb; i < sb + n_; ++i) {
    int r = r_[i];
    // Render with Y folded: each (1,1) site is Y and absorbs one i.
    int ys = 0;
    std::string body;
    for (int q = 0; q < n_; ++q) {
      int code = (xbit(i, q) ? 1 : 0) | (zbit(i, q) ? 2 : 0);
      if (code == 3) ++ys;
      body += letters[code];
    }
    int adj = (r - ys) & 3;
    s += adj == 0 ? '+' : (adj == 2 ? '-' : '?');
    s += body;
    s += '\n';
  }
  return s;
}

Tableau Tableau::from_graph(const GraphState& g) {
  int n = g.num_vertices();
  if (n == 0) throw std::invalid_argument("from_graph: empty graph");
  Tableau t(n);
  // Stabilizers X_v Z_{N(v)}, destabilizers Z_v.
  std::fill(t.x_.begin(), t.x_.end(), 0);
  std::fill(t.z_.begin(), t.z_.end(), 0);
  std::fill(t.r_.begin(), t.r_.end(), 0);
  for (int v = 0; v < n; ++v) {
    t.set_zbit(v, v, true);  // destabilizer Z_v
    t.set_xbit(n + v, v, true);
    for (int u : g.neighborhood(v)) t.set_zbit(n + v, u, true);
  }
  for (int v = 0; v < n; ++v)
    if (!g.tag(v).is_identity()) t.apply_clifford1(g.tag(v), v);
  return t;
}

std::pair<GraphState, std::vector<Clifford1>> Tableau::extract_graph() const {
  int n = n_;
  Tableau work(*this);
  std::vector<Clifford1> applied(n, Clifford1::I());
  auto record = [&](Clifford1 c, int q) {
    applied[q] = applied[q].then(c);
  };
  int sb = work.stab_begin();
  // Bring the stabilizer X block to identity, hitting stuck columns with H.
  for (int q = 0; q < n; ++q) {
    int p = -1;
    for (int i = sb + q; i < sb + n; ++i)
      if (work.xbit(i, q)) { p = i; break; }
    if (p < 0) {
      work.apply_h(q);
      record(Clifford1::H(), q);
      for (int i = sb + q; i < sb + n; ++i)
        if (work.xbit(i, q)) { p = i; break; }
    }
    if (p < 0) throw std::runtime_error("extract_graph: degenerate tableau");
    if (p != sb + q) {
      for (int w = 0; w < work.words_; ++w) {
        std::swap(work.x_[(size_t)p * work.words_ + w],
                  work.x_[(size_t)(sb + q) * work.words_ + w]);
        std::swap(work.z_[(size_t)p * work.words_ + w],
                  work.z_[(size_t)(sb + q) * work.words_ + w]);
      }
      std::swap(work.r_[p], work.r_[sb + q]);
    }
    for (int i = sb; i < sb + n; ++i)
      if (i != sb + q && work.xbit(i, q)) work.rowmult(i, sb + q);
  }
  // Clear the Z diagonal with S gates, then signs with Z gates.
  for (int q = 0; q < n; ++q)
    if (work.zbit(sb + q, q)) {
      work.apply_s(q);
      record(Clifford1::S(), q);
    }
  for (int q = 0; q < n; ++q) {
    if (work.r_[sb + q] == 2) {
      work.apply_z(q);
      record(Clifford1::Z(), q);
    } else if (work.r_[sb + q] != 0) {
      throw std::runtime_error("extract_graph: non-Hermitian row phase");
    }
  }
  GraphState g(n);
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u)
      if (u != v && work.zbit(sb + v, u)) {
        if (!work.zbit(sb + u, v))
          throw std::runtime_error("extract_graph: asymmetric Z block");
        if (u < v) continue;
        g.add_edge(v, u);
      }
  std::vector<Clifford1> u_out(n, Clifford1::I());
  for (int q = 0; q < n; ++q) u_out[q] = applied[q].inverse();
  return {g, u_out};
}

bool Tableau::well_formed() const {
  // Hermitian phases and pairwise commutation of stabilizer rows; the
  // destabilizer pairing when present.
  int sb = stab_begin();
  auto sympl = [&](int i, int j) {
    int s = 0;
    for (int w = 0; w < words_; ++w) {
      s += __builtin_popcountll(x_[(size_t)i * words_ + w] &
                                z_[(size_t)j * words_ + w]);
      s += __builtin_popcountll(z_[(size_t)i * words_ + w] &
                                x_[(size_t)j * words_ + w]);
    }
    return s & 1;
  };
  for (int i = sb; i < sb + n_; ++i) {
    int overlap = 0;
    for (int w = 0; w < words_; ++w)
      overlap += __builtin_popcountll(x_[(size_t)i * words_ + w] &
                                      z_[(size_t)i * words_ + w]);
    if (((r_[i] & 1) != (overlap & 1))) return false;
    for (int j = i + 1; j < sb + n_; ++j)
      if (sympl(i, j)) return false;
  }
  if (has_destab_) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (sympl(i, n_ + j) != (i == j ? 1 : 0)) return false;
  }
  Echelon e = make_echelon(*this);
  return (int)e.rows.size() == n_;
}

}  // namespace emitforge

#include "emitforge/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace emitforge {

GraphState::GraphState(int n, Role role)
    : n_(n),
      words_((n + 63) / 64),
      adj_((size_t)n * ((n + 63) / 64), 0),
      roles_(n, role),
      tags_(n, Clifford1::I()) {
  if (n < 0) throw std::invalid_argument("GraphState: negative size");
}

void GraphState::check(int v) const {
  if (v < 0 || v >= n_)
    throw std::invalid_argument("GraphState: unknown vertex id " +
                                std::to_string(v));
}

bool GraphState::has_edge(int u, int v) const {
  check(u);
  check(v);
  return (adj_[(size_t)u * words_ + v / 64] >> (v % 64)) & 1;
}

void GraphState::set_edge(int u, int v, bool present) {
  check(u);
  check(v);
  if (u == v) throw std::invalid_argument("GraphState: self-loop");
  std::uint64_t mu = 1ull << (v % 64), mv = 1ull << (u % 64);
  if (present) {
    adj_[(size_t)u * words_ + v / 64] |= mu;
    adj_[(size_t)v * words_ + u / 64] |= mv;
  } else {
    adj_[(size_t)u * words_ + v / 64] &= ~mu;
    adj_[(size_t)v * words_ + u / 64] &= ~mv;
  }
}

void GraphState::toggle_edge(int u, int v) {
  check(u);
  check(v);
  if (u == v) throw std::invalid_argument("GraphState: self-loop");
  adj_[(size_t)u * words_ + v / 64] ^= 1ull << (v % 64);
  adj_[(size_t)v * words_ + u / 64] ^= 1ull << (u % 64);
}

int GraphState::degree(int v) const {
  check(v);
  int d = 0;
  for (int w = 0; w < words_; ++w)
    d += __builtin_popcountll(adj_[(size_t)v * words_ + w]);
  return d;
}

std::vector<int> GraphState::neighborhood(int v) const {
  check(v);
  std::vector<int> out;
  for (int w = 0; w < words_; ++w) {
    std::uint64_t bits = adj_[(size_t)v * words_ + w];
    while (bits) {
      int b = __builtin_ctzll(bits);
      out.push_back(w * 64 + b);
      bits &= bits - 1;
    }
  }
  return out;
}

std::vector<std::pair<int, int>> GraphState::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < n_; ++u)
    for (int v : neighborhood(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

int GraphState::edge_count() const {
  int total = 0;
  for (int v = 0; v < n_; ++v) total += degree(v);
  return total / 2;
}

void GraphState::apply_local_complementation(int v) {
  check(v);
  std::vector<int> nv = neighborhood(v);
  const size_t base = (size_t)v * words_;
  // Toggle all pairs inside N(v): XOR v's row into each neighbor's row,
  // then clear the self-loop bit that introduces.
  for (int u : nv) {
    for (int w = 0; w < words_; ++w)
      adj_[(size_t)u * words_ + w] ^= adj_[base + w];
    adj_[(size_t)u * words_ + u / 64] ^= 1ull << (u % 64);
  }
  // Corrections: represented state is tags * |graph>; the LC image satisfies
  // |G> = U^dag |tau_v(G)> with U = exp(-i pi/4 X_v) prod_u exp(i pi/4 Z_u),
  // so sqrt(iX) lands on v and sqrt(-iZ) ~ S on the neighbors.
  tags_[v] = tags_[v].compose(Clifford1::SqrtXdg());
  for (int u : nv) tags_[u] = tags_[u].compose(Clifford1::S());
}

void GraphState::pivot(int u, int v) {
  if (!has_edge(u, v)) throw std::invalid_argument("pivot: (u,v) not an edge");
  apply_local_complementation(u);
  apply_local_complementation(v);
  apply_local_complementation(u);
}

void GraphState::apply_cz_rewrite(int u, int v) {
  if (!tags_[u].is_identity() || !tags_[v].is_identity())
    throw std::logic_error("apply_cz_rewrite: operands carry tags");
  toggle_edge(u, v);
}

void GraphState::apply_cnot_rewrite(int c, int t) {
  check(c);
  check(t);
  if (c == t) throw std::invalid_argument("cnot: coincident vertices");
  if (!tags_[c].is_identity() || !tags_[t].is_identity())
    throw std::logic_error("apply_cnot_rewrite: operands carry tags");
  bool adjacent = has_edge(c, t);
  // Control inherits target's neighborhood; the mutual edge survives.
  for (int u : neighborhood(t))
    if (u != c) toggle_edge(c, u);
  if (adjacent) tags_[c] = tags_[c].compose(Clifford1::Z());
}

bool GraphState::adjacency_equal(const GraphState& other) const {
  return n_ == other.n_ && adj_ == other.adj_;
}

std::string GraphState::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  auto es = edges();
  std::sort(es.begin(), es.end());
  nlohmann::json arr = nlohmann::json::array();
  for (auto& [u, v] : es) arr.push_back({u, v});
  j["edges"] = arr;
  bool any_emitter = false;
  for (auto r : roles_) any_emitter |= r == Role::Emitter;
  if (any_emitter) {
    nlohmann::json rr = nlohmann::json::array();
    for (auto r : roles_) rr.push_back(r == Role::Emitter ? "emitter" : "photon");
    j["roles"] = rr;
  }
  return j.dump();
}

GraphState GraphState::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("n") || !j.contains("edges"))
    throw std::invalid_argument("graph json: missing n/edges");
  GraphState g(j["n"].get<int>());
  for (auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("graph json: bad edge entry");
    g.add_edge(e[0].get<int>(), e[1].get<int>());
  }
  if (j.contains("roles")) {
    auto& rr = j["roles"];
    if ((int)rr.size() != g.num_vertices())
      throw std::invalid_argument("graph json: roles length mismatch");
    for (int v = 0; v < g.num_vertices(); ++v)
      g.set_role(v, rr[v].get<std::string>() == "emitter" ? Role::Emitter
                                                          : Role::Photon);
  }
  return g;
}

void VertexPartition::validate(int n) const {
  if ((int)assignment.size() != n)
    throw std::invalid_argument("partition: partial assignment");
  std::vector<int> sizes;
  for (int v = 0; v < n; ++v) {
    int g = assignment[v];
    if (g < 0) throw std::invalid_argument("partition: unassigned vertex");
    if (g >= (int)sizes.size()) sizes.resize(g + 1, 0);
    sizes[g]++;
  }
  for (int s : sizes)
    if (g_max > 0 && s > g_max)
      throw std::invalid_argument("partition: part exceeds g_max");
}

std::vector<std::pair<int, int>> cut_edges(const GraphState& g,
                                           const VertexPartition& p) {
  p.validate(g.num_vertices());
  std::vector<std::pair<int, int>> out;
  for (auto& [u, v] : g.edges())
    if (p.assignment[u] != p.assignment[v]) out.emplace_back(u, v);
  return out;
}

int cut_rank(const GraphState& g, const std::vector<int>& a) {
  int n = g.num_vertices();
  std::vector<bool> in_a(n, false);
  for (int v : a) {
    if (v < 0 || v >= n) throw std::invalid_argument("cut_rank: unknown id");
    in_a[v] = true;
  }
  std::vector<int> rest;
  for (int v = 0; v < n; ++v)
    if (!in_a[v]) rest.push_back(v);
  // Rows indexed by A, columns by the complement, packed.
  int cols = (int)rest.size();
  int cw = (cols + 63) / 64;
  if (cw == 0) return 0;
  std::vector<std::uint64_t> rows;
  for (int v : a) {
    std::vector<std::uint64_t> r(cw, 0);
    for (int j = 0; j < cols; ++j)
      if (g.has_edge(v, rest[j])) r[j / 64] |= 1ull << (j % 64);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  int m = (int)a.size();
  int rank = 0;
  for (int col = 0; col < cols && rank < m; ++col) {
    int pivot = -1;
    for (int i = rank; i < m; ++i)
      if ((rows[(size_t)i * cw + col / 64] >> (col % 64)) & 1) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    for (int w = 0; w < cw; ++w)
      std::swap(rows[(size_t)rank * cw + w], rows[(size_t)pivot * cw + w]);
    for (int i = 0; i < m; ++i) {
      if (i == rank) continue;
      if ((rows[(size_t)i * cw + col / 64] >> (col % 64)) & 1)
        for (int w = 0; w < cw; ++w)
          rows[(size_t)i * cw + w] ^= rows[(size_t)rank * cw + w];
    }
    ++rank;
  }
  return rank;
}

}  // namespace emitforge

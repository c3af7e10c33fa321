#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "emitforge/clifford1q.hpp"

namespace emitforge {

enum class Role : std::uint8_t { Photon = 0, Emitter = 1 };

// Graph state: packed symmetric adjacency (bit rows), per-vertex role and
// local-Clifford tag. The represented quantum state is
//   (tensor of tags) |adjacency graph state>,
// and every rewrite here (LC, pivot, CZ/CNOT) preserves it.
class GraphState {
 public:
  GraphState() : n_(0), words_(0) {}
  explicit GraphState(int n, Role role = Role::Photon);

  int num_vertices() const { return n_; }
  Role role(int v) const { check(v); return roles_[v]; }
  void set_role(int v, Role r) { check(v); roles_[v] = r; }
  Clifford1 tag(int v) const { check(v); return tags_[v]; }
  void set_tag(int v, Clifford1 c) { check(v); tags_[v] = c; }

  bool has_edge(int u, int v) const;
  void add_edge(int u, int v) { set_edge(u, v, true); }
  void remove_edge(int u, int v) { set_edge(u, v, false); }
  void toggle_edge(int u, int v);
  void set_edge(int u, int v, bool present);

  int degree(int v) const;
  std::vector<int> neighborhood(int v) const;
  const std::uint64_t* row(int v) const { return adj_.data() + (size_t)v * words_; }
  int words() const { return words_; }

  std::vector<std::pair<int, int>> edges() const;  // u < v, lexicographic
  int edge_count() const;

  // Toggles every pair inside N(v) and records the single-qubit corrections
  // on v and its neighbors so the represented state is unchanged.
  void apply_local_complementation(int v);

  // Edge local complementation: LC(u), LC(v), LC(u). Requires edge (u,v);
  // swaps the roles of u and v in the adjacency.
  void pivot(int u, int v);

  // CZ on vertices (u,v) of the bare graph toggles the edge. Tags on u and v
  // must be identity (callers flush first); enforced.
  void apply_cz_rewrite(int u, int v);

  // Graph rewrite of CNOT(control -> target) acting on the bare graph state:
  // control's row gains target's row; when control ~ target the edge is kept
  // and a Z correction lands on the control's tag. Tags on c, t must be
  // identity on entry.
  void apply_cnot_rewrite(int c, int t);

  bool adjacency_equal(const GraphState& other) const;

  std::string to_json() const;  // {"n":..,"edges":[[u,v],..],"roles":[..]}
  static GraphState from_json(const std::string& text);

 private:
  void check(int v) const;

  int n_;
  int words_;
  std::vector<std::uint64_t> adj_;
  std::vector<Role> roles_;
  std::vector<Clifford1> tags_;
};

struct VertexPartition {
  std::vector<int> assignment;  // vertex -> subgraph id
  int g_max = 0;
  int subgraph_count = 0;       // ceil(n / g_max), upper bound on used ids

  void validate(int n) const;   // throws on partial/oversized parts
};

std::vector<std::pair<int, int>> cut_edges(const GraphState& g,
                                           const VertexPartition& p);

// GF(2) rank of the biadjacency matrix between A and its complement.
int cut_rank(const GraphState& g, const std::vector<int>& a);

}  // namespace emitforge

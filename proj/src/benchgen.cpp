#include "emitforge/benchgen.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "emitforge/tableau.hpp"  // Prng

namespace emitforge {

GraphState gen_lattice(int width, int height) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("gen_lattice: dimensions must be positive");
  GraphState g(width * height);
  auto id = [&](int x, int y) { return y * width + x; };
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      if (x + 1 < width) g.add_edge(id(x, y), id(x + 1, y));
      if (y + 1 < height) g.add_edge(id(x, y), id(x, y + 1));
    }
  return g;
}

GraphState gen_tree(int branching, int depth) {
  if (branching <= 0 || depth < 0)
    throw std::invalid_argument("gen_tree: bad parameters");
  long total = 1, layer = 1;
  for (int d = 0; d < depth; ++d) {
    layer *= branching;
    total += layer;
    if (total > 4096) throw std::invalid_argument("gen_tree: too large");
  }
  GraphState g((int)total);
  // BFS numbering: children of v start right after the previous layer.
  int next = 1;
  std::vector<int> frontier{0};
  for (int d = 0; d < depth; ++d) {
    std::vector<int> nf;
    for (int v : frontier)
      for (int b = 0; b < branching; ++b) {
        g.add_edge(v, next);
        nf.push_back(next++);
      }
    frontier = std::move(nf);
  }
  return g;
}

static bool is_connected(const GraphState& g) {
  int n = g.num_vertices();
  if (n == 0) return true;
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : g.neighborhood(v))
      if (!seen[u]) {
        seen[u] = true;
        ++count;
        stack.push_back(u);
      }
  }
  return count == n;
}

WaxmanResult gen_waxman(int n, double alpha, double beta, std::uint64_t seed) {
  if (n <= 0 || alpha <= 0 || alpha > 1 || beta <= 0 || beta > 1)
    throw std::invalid_argument("gen_waxman: parameters out of range");
  WaxmanResult out;
  for (int attempt = 0; attempt < 50; ++attempt) {
    Prng rng(seed + 0x517cc1b727220a95ull * attempt);
    std::vector<double> xs(n), ys(n);
    for (int v = 0; v < n; ++v) {
      xs[v] = rng.unit();
      ys[v] = rng.unit();
    }
    double big = 0;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        big = std::max(big, std::hypot(xs[u] - xs[v], ys[u] - ys[v]));
    if (big <= 0) big = 1;
    GraphState g(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        double d = std::hypot(xs[u] - xs[v], ys[u] - ys[v]);
        double p = alpha * std::exp(-d / (beta * big));
        if (rng.unit() < p) g.add_edge(u, v);
      }
    out.attempts = attempt + 1;
    out.graph = g;
    out.connected = is_connected(g);
    if (out.connected) return out;
  }
  return out;
}

}  // namespace emitforge

#ifndef HMD_TEST_UTIL_HPP
#define HMD_TEST_UTIL_HPP

#include <vector>

#include "hmd/hypergraph.hpp"
#include "hmd/rng.hpp"
#include "hmd/types.hpp"

namespace hmd::testing {

// Desk fixtures used across the suites.
//   h0: single edge {a,b}, w=1, direct flow only
//   h1: single edge {a,b,c}, w=1, beta0=0.5, c mediates with beta=0.5
//   h2: path a-b, b-c with unit weights
//   h3: edges {a,b} and {a,c} with unit weights
inline Hypergraph h0() { return Hypergraph(2, {{{0, 1}, 1.0, 1.0, {}}}); }

inline Hypergraph h1() { return Hypergraph(3, {{{0, 1, 2}, 1.0, 0.5, {{2, 0.5}}}}); }

inline Hypergraph h2() {
  return Hypergraph(3, {{{0, 1}, 1.0, 1.0, {}}, {{1, 2}, 1.0, 1.0, {}}});
}

inline Hypergraph h3() {
  return Hypergraph(3, {{{0, 1}, 1.0, 1.0, {}}, {{0, 2}, 1.0, 1.0, {}}});
}

inline DensityVector vec(std::initializer_list<Real> values) {
  DensityVector f(static_cast<Index>(values.size()));
  Index i = 0;
  for (Real v : values) f[i++] = v;
  return f;
}

// Random edge-weighted hypergraph with mixed mediator profiles, including the
// beta0 = 0 and beta0 = 1 extremes and occasional singleton edges. Every
// vertex ends up covered.
inline Hypergraph random_hypergraph(Rng& rng, Index max_n = 10, Index max_m = 15) {
  const Index n = rng.uniform_int(2, max_n);
  const Index m = rng.uniform_int(1, max_m);
  std::vector<Edge> edges;
  std::vector<char> covered(n, 0);

  for (Index e = 0; e < m; ++e) {
    Edge edge;
    const int size = rng.bernoulli(0.07) ? 1 : rng.uniform_int(2, std::min<Index>(n, 4));
    std::vector<Index> pool(n);
    for (Index u = 0; u < n; ++u) pool[u] = u;
    for (int k = 0; k < size; ++k) {
      const int pick = rng.uniform_int(k, n - 1);
      std::swap(pool[k], pool[pick]);
      edge.vertices.push_back(pool[k]);
      covered[pool[k]] = 1;
    }
    edge.weight = rng.uniform(0.2, 2.0);

    const Real mode = rng.uniform();
    if (mode < 0.3 || size == 1) {
      edge.beta0 = 1.0;
    } else {
      // random mediator support; mode < 0.6 pins beta0 = 0
      const int support = rng.uniform_int(1, size);
      Real raw0 = mode < 0.6 ? 0.0 : rng.uniform();
      std::vector<Real> raw(support);
      Real total = raw0;
      for (Real& x : raw) {
        x = 0.05 + rng.uniform();
        total += x;
      }
      edge.beta0 = raw0 / total;
      for (int k = 0; k < support; ++k) edge.beta.emplace_back(edge.vertices[k], raw[k] / total);
    }
    edges.push_back(std::move(edge));
  }

  for (Index u = 0; u < n; ++u) {
    if (!covered[u]) {
      Edge patch;
      patch.vertices = {u, (u + 1) % n == u ? 0 : (u + 1) % n};
      patch.weight = 1.0;
      edges.push_back(std::move(patch));
    }
  }
  return Hypergraph(n, std::move(edges));
}

inline DensityVector random_vector(Rng& rng, Index n, bool with_ties = false) {
  DensityVector f(n);
  for (Index u = 0; u < n; ++u) f[u] = rng.uniform(-1.0, 1.0);
  if (with_ties) {
    for (Index u = 0; u < n; ++u) f[u] = std::round(f[u] * 2.0) * 0.5;
  }
  return f;
}

}  // namespace hmd::testing

#endif

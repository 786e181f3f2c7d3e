#ifndef HMD_HYPERGRAPH_HPP
#define HMD_HYPERGRAPH_HPP

#include <utility>
#include <vector>

#include "hmd/errors.hpp"
#include "hmd/types.hpp"

namespace hmd {

// One weighted hyperedge with mediator coefficients. beta0 is the share of
// flow going directly from the maximum-density vertices to the minimum-density
// ones; beta[v] is the share routed through vertex v as a mediator. Vertices
// absent from beta have coefficient zero. beta0 + sum(beta) must equal 1.
struct Edge {
  VertexSet vertices;                        // sorted, no duplicates
  Real weight = 1.0;
  Real beta0 = 1.0;
  std::vector<std::pair<Index, Real>> beta;  // sorted by vertex id

  Real beta_at(Index v) const;
};

// Argmax/argmin vertices of a vector within one edge. When the vector is
// constant on the edge, both sets equal the whole edge.
struct EdgeExtrema {
  VertexSet max_set;
  VertexSet min_set;
  Real fmax = 0.0;
  Real fmin = 0.0;

  bool constant() const { return fmax == fmin; }
};

// Immutable edge-weighted hypergraph with cached vertex weights
// w_u = sum of w_e over edges containing u. Validation rejects empty edges,
// non-positive edge weights, malformed beta coefficients and isolated
// vertices, so all derived quantities are well defined.
class Hypergraph {
 public:
  Hypergraph(Index n, std::vector<Edge> edges);

  Index vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  Index edge_count() const { return static_cast<Index>(edges_.size()); }

  const Vector& vertex_weights() const { return weights_; }
  const Vector& sqrt_vertex_weights() const { return sqrt_weights_; }
  Real vertex_weight(Index u) const { return weights_[u]; }
  Real total_weight() const { return total_weight_; }
  Real set_weight(const VertexSet& set) const;

  // Same vertices and edge weights with every edge forced to direct
  // max-to-min flow (beta0 = 1, no mediators).
  Hypergraph without_mediators() const;

  bool two_uniform_no_mediators() const;

 private:
  Index n_ = 0;
  std::vector<Edge> edges_;
  Vector weights_;
  Vector sqrt_weights_;
  Real total_weight_ = 0.0;
};

// Transforms between the density space f, the measure space phi = W f and the
// normalized space x = W^{1/2} f.
MeasureVector to_measure(const Hypergraph& h, VectorRef f);
DensityVector to_density(const Hypergraph& h, VectorRef phi);
NormalizedVector to_normalized(const Hypergraph& h, VectorRef f);
DensityVector from_normalized(const Hypergraph& h, VectorRef x);

// Weighted inner product <f, g>_w = f' W g and the norm it induces.
Real inner_w(const Hypergraph& h, VectorRef f, VectorRef g);
Real norm_w(const Hypergraph& h, VectorRef f);

// Exact float comparisons; tolerance-based grouping lives in the diffusion
// module so there is a single place that owns the tie policy.
EdgeExtrema edge_extrema(const Edge& e, VectorRef f);

void check_length(const Hypergraph& h, VectorRef f);

}  // namespace hmd

#endif

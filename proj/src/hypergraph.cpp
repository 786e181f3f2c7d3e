#include "hmd/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hmd {

namespace {

constexpr Real kBetaSumTolerance = 1e-9;

}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyEdge: return "EmptyEdge";
    case ErrorCode::NonPositiveEdgeWeight: return "NonPositiveEdgeWeight";
    case ErrorCode::BetaSumMismatch: return "BetaSumMismatch";
    case ErrorCode::NegativeBeta: return "NegativeBeta";
    case ErrorCode::UnknownBetaVertex: return "UnknownBetaVertex";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::IsolatedVertex: return "IsolatedVertex";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::TrivialSet: return "TrivialSet";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotTwoUniform: return "NotTwoUniform";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::SingleVertex: return "SingleVertex";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
  }
  return "UnknownError";
}

Real Edge::beta_at(Index v) const {
  for (const auto& [u, b] : beta) {
    if (u == v) return b;
  }
  return 0.0;
}

Hypergraph::Hypergraph(Index n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ <= 0) throw Error(ErrorCode::IsolatedVertex, "hypergraph needs at least one vertex");
  weights_ = Vector::Zero(n_);

  for (std::size_t idx = 0; idx < edges_.size(); ++idx) {
    Edge& e = edges_[idx];
    const std::string where = "edge " + std::to_string(idx);
    if (e.vertices.empty()) throw Error(ErrorCode::EmptyEdge, where);
    if (!(e.weight > 0.0))
      throw Error(ErrorCode::NonPositiveEdgeWeight, where + " has w = " + std::to_string(e.weight));

    std::sort(e.vertices.begin(), e.vertices.end());
    for (std::size_t k = 0; k < e.vertices.size(); ++k) {
      Index v = e.vertices[k];
      if (v < 0 || v >= n_)
        throw Error(ErrorCode::VertexOutOfRange, where + " references vertex " + std::to_string(v));
      if (k > 0 && e.vertices[k - 1] == v)
        throw Error(ErrorCode::DuplicateVertex, where + " repeats vertex " + std::to_string(v));
    }

    if (e.beta0 < 0.0) throw Error(ErrorCode::NegativeBeta, where + " beta0 < 0");
    Real beta_sum = e.beta0;
    std::sort(e.beta.begin(), e.beta.end());
    for (std::size_t k = 0; k < e.beta.size(); ++k) {
      const auto& [v, b] = e.beta[k];
      if (b < 0.0) throw Error(ErrorCode::NegativeBeta, where + " beta[" + std::to_string(v) + "] < 0");
      if (!std::binary_search(e.vertices.begin(), e.vertices.end(), v))
        throw Error(ErrorCode::UnknownBetaVertex,
                    where + " assigns beta to vertex " + std::to_string(v) + " outside the edge");
      if (k > 0 && e.beta[k - 1].first == v)
        throw Error(ErrorCode::DuplicateVertex, where + " repeats beta vertex " + std::to_string(v));
      beta_sum += b;
    }
    if (std::abs(beta_sum - 1.0) > kBetaSumTolerance)
      throw Error(ErrorCode::BetaSumMismatch, where + " beta sums to " + std::to_string(beta_sum));

    for (Index v : e.vertices) weights_[v] += e.weight;
  }

  for (Index u = 0; u < n_; ++u) {
    if (!(weights_[u] > 0.0))
      throw Error(ErrorCode::IsolatedVertex, "vertex " + std::to_string(u) + " is in no edge");
  }
  sqrt_weights_ = weights_.cwiseSqrt();
  total_weight_ = weights_.sum();
}

Real Hypergraph::set_weight(const VertexSet& set) const {
  Real w = 0.0;
  for (Index u : set) w += weights_[u];
  return w;
}

Hypergraph Hypergraph::without_mediators() const {
  std::vector<Edge> plain = edges_;
  for (Edge& e : plain) {
    e.beta0 = 1.0;
    e.beta.clear();
  }
  return Hypergraph(n_, std::move(plain));
}

bool Hypergraph::two_uniform_no_mediators() const {
  for (const Edge& e : edges_) {
    if (e.vertices.size() != 2 || e.beta0 != 1.0) return false;
  }
  return true;
}

void check_length(const Hypergraph& h, VectorRef f) {
  if (f.size() != h.vertex_count())
    throw Error(ErrorCode::LengthMismatch, "vector has length " + std::to_string(f.size()) +
                                               ", hypergraph has " + std::to_string(h.vertex_count()) +
                                               " vertices");
}

MeasureVector to_measure(const Hypergraph& h, VectorRef f) {
  check_length(h, f);
  return h.vertex_weights().cwiseProduct(f);
}

DensityVector to_density(const Hypergraph& h, VectorRef phi) {
  check_length(h, phi);
  return phi.cwiseQuotient(h.vertex_weights());
}

NormalizedVector to_normalized(const Hypergraph& h, VectorRef f) {
  check_length(h, f);
  return h.sqrt_vertex_weights().cwiseProduct(f);
}

DensityVector from_normalized(const Hypergraph& h, VectorRef x) {
  check_length(h, x);
  return x.cwiseQuotient(h.sqrt_vertex_weights());
}

Real inner_w(const Hypergraph& h, VectorRef f, VectorRef g) {
  check_length(h, f);
  check_length(h, g);
  return f.cwiseProduct(h.vertex_weights()).dot(g);
}

Real norm_w(const Hypergraph& h, VectorRef f) {
  check_length(h, f);
  return std::sqrt(f.cwiseProduct(h.vertex_weights()).dot(f));
}

EdgeExtrema edge_extrema(const Edge& e, VectorRef f) {
  EdgeExtrema out;
  out.fmax = f[e.vertices.front()];
  out.fmin = out.fmax;
  for (Index v : e.vertices) {
    out.fmax = std::max(out.fmax, f[v]);
    out.fmin = std::min(out.fmin, f[v]);
  }
  if (out.fmax == out.fmin) {
    out.max_set = e.vertices;
    out.min_set = e.vertices;
    return out;
  }
  for (Index v : e.vertices) {
    if (f[v] == out.fmax) out.max_set.push_back(v);
    if (f[v] == out.fmin) out.min_set.push_back(v);
  }
  return out;
}

}  // namespace hmd

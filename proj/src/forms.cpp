#include "hmd/forms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hmd {

namespace {

Real sq(Real x) { return x * x; }

void add_sym(InteractionMatrix& a, Index u, Index v, Real mass) {
  if (mass == 0.0) return;
  if (u == v) {
    // Mass on a diagonal pair multiplies a zero difference; the diagonal is
    // recomputed from the row-sum constraint below, so nothing to record.
    return;
  }
  if (u > v) std::swap(u, v);
  a.offdiag[{u, v}] += mass;
}

void finish_diagonal(const Hypergraph& h, InteractionMatrix& a) {
  a.diag = h.vertex_weights();
  for (const auto& [uv, mass] : a.offdiag) {
    a.diag[uv.first] -= mass;
    a.diag[uv.second] -= mass;
  }
}

// Splits `total` over k slots: uniformly, or by normalized random weights.
std::vector<Real> split_mass(Real total, std::size_t k, Rng* rng) {
  std::vector<Real> shares(k, total / static_cast<Real>(k));
  if (rng == nullptr || k == 1) return shares;
  Real sum = 0.0;
  for (auto& s : shares) {
    s = 0.05 + rng->uniform();  // bounded away from zero to keep entries meaningful
    sum += s;
  }
  for (auto& s : shares) s *= total / sum;
  return shares;
}

InteractionMatrix build_interactions(const Hypergraph& h, VectorRef f, Rng* rng) {
  check_length(h, f);
  InteractionMatrix a;
  for (const Edge& e : h.edges()) {
    const EdgeExtrema ex = edge_extrema(e, f);
    if (ex.constant()) continue;  // all mass stays on the diagonal

    if (e.beta0 > 0.0) {
      const std::size_t pairs = ex.max_set.size() * ex.min_set.size();
      const std::vector<Real> shares = split_mass(e.weight * e.beta0, pairs, rng);
      std::size_t k = 0;
      for (Index s : ex.max_set)
        for (Index i : ex.min_set) add_sym(a, s, i, shares[k++]);
    }
    for (const auto& [j, beta] : e.beta) {
      if (beta == 0.0) continue;
      const Real mass = e.weight * beta;
      const std::vector<Real> up = split_mass(mass, ex.max_set.size(), rng);
      for (std::size_t k = 0; k < ex.max_set.size(); ++k) add_sym(a, ex.max_set[k], j, up[k]);
      const std::vector<Real> down = split_mass(mass, ex.min_set.size(), rng);
      for (std::size_t k = 0; k < ex.min_set.size(); ++k) add_sym(a, j, ex.min_set[k], down[k]);
    }
  }
  finish_diagonal(h, a);
  return a;
}

}  // namespace

Real InteractionMatrix::at(Index u, Index v) const {
  if (u == v) return diag[u];
  if (u > v) std::swap(u, v);
  auto it = offdiag.find({u, v});
  return it == offdiag.end() ? 0.0 : it->second;
}

Real InteractionMatrix::row_sum(Index u) const {
  Real sum = diag[u];
  for (const auto& [uv, mass] : offdiag) {
    if (uv.first == u || uv.second == u) sum += mass;
  }
  return sum;
}

Real quadratic_form(const Hypergraph& h, VectorRef f) {
  check_length(h, f);
  Real total = 0.0;
  for (const Edge& e : h.edges()) {
    const EdgeExtrema ex = edge_extrema(e, f);
    Real term = e.beta0 * sq(ex.fmax - ex.fmin);
    for (const auto& [j, beta] : e.beta) term += beta * (sq(ex.fmax - f[j]) + sq(f[j] - ex.fmin));
    total += e.weight * term;
  }
  return total;
}

Real quadratic_form_q0(const Hypergraph& h, VectorRef f) {
  check_length(h, f);
  Real total = 0.0;
  for (const Edge& e : h.edges()) {
    const EdgeExtrema ex = edge_extrema(e, f);
    total += e.weight * sq(ex.fmax - ex.fmin);
  }
  return total;
}

Real discrepancy_ratio(const Hypergraph& h, VectorRef f) {
  const Real denom = inner_w(h, f, f);
  if (denom == 0.0) throw Error(ErrorCode::ZeroVector, "discrepancy ratio of the zero vector");
  return quadratic_form(h, f) / denom;
}

CutResult conductance(const Hypergraph& h, const VertexSet& set) {
  if (set.empty() || static_cast<Index>(set.size()) >= h.vertex_count())
    throw Error(ErrorCode::TrivialSet, "conductance needs a nonempty proper subset");
  std::vector<char> in_set(h.vertex_count(), 0);
  for (Index u : set) {
    if (u < 0 || u >= h.vertex_count())
      throw Error(ErrorCode::VertexOutOfRange, "set vertex " + std::to_string(u));
    if (in_set[u]) throw Error(ErrorCode::DuplicateVertex, "set repeats vertex " + std::to_string(u));
    in_set[u] = 1;
  }

  CutResult out;
  out.set = set;
  std::sort(out.set.begin(), out.set.end());
  for (const Edge& e : h.edges()) {
    bool inside = false, outside = false;
    for (Index v : e.vertices) (in_set[v] ? inside : outside) = true;
    if (inside && outside) out.cut_weight += e.weight;
  }
  out.set_weight = h.set_weight(out.set);
  out.conductance = out.cut_weight / out.set_weight;
  return out;
}

InteractionMatrix interaction_matrix(const Hypergraph& h, VectorRef f) {
  return build_interactions(h, f, nullptr);
}

InteractionMatrix interaction_matrix_random(const Hypergraph& h, VectorRef f, Rng& rng) {
  return build_interactions(h, f, &rng);
}

Real interaction_quadratic(const Hypergraph& h, const InteractionMatrix& a, VectorRef f) {
  check_length(h, f);
  Real value = f.cwiseProduct(h.vertex_weights() - a.diag).dot(f);
  for (const auto& [uv, mass] : a.offdiag) value -= 2.0 * mass * f[uv.first] * f[uv.second];
  return value;
}

Real verify_quadratic_identity(const Hypergraph& h, VectorRef f) {
  const InteractionMatrix a = interaction_matrix(h, f);
  return std::abs(interaction_quadratic(h, a, f) - quadratic_form(h, f));
}

}  // namespace hmd

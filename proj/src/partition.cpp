#include "hmd/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace hmd {

CenteredSplit center_vector(const Hypergraph& h, VectorRef f) {
  check_length(h, f);
  if (f.isZero(0.0)) throw Error(ErrorCode::ZeroVector, "cannot center the zero vector");

  std::vector<Index> order(h.vertex_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return f[a] < f[b]; });

  const Real half = 0.5 * h.total_weight();
  Real above = h.total_weight();
  CenteredSplit out;
  out.center = f[order.back()];
  for (std::size_t i = 0; i < order.size(); ++i) {
    above -= h.vertex_weight(order[i]);
    const bool last_of_value = i + 1 == order.size() || f[order[i + 1]] != f[order[i]];
    if (last_of_value && above <= half) {
      out.center = f[order[i]];
      break;
    }
  }

  out.shifted = f.array() - out.center;
  out.positive = out.shifted.cwiseMax(0.0);
  out.negative = out.shifted.cwiseMin(0.0);
  return out;
}

CutResult sweep_cut(const Hypergraph& h, VectorRef f) {
  check_length(h, f);
  if (f.isZero(0.0)) throw Error(ErrorCode::ZeroVector, "cannot sweep the zero vector");

  std::vector<Index> order;
  for (Index u = 0; u < h.vertex_count(); ++u)
    if (f[u] != 0.0) order.push_back(u);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const Real fa = f[a] * f[a], fb = f[b] * f[b];
    return fa > fb || (fa == fb && a < b);
  });

  std::vector<char> in_set(h.vertex_count(), 0);
  Real set_weight = 0.0;
  bool found = false;
  CutResult best;

  for (std::size_t i = 0; i < order.size(); ++i) {
    in_set[order[i]] = 1;
    set_weight += h.vertex_weight(order[i]);
    // Grow the level set until the next distinct threshold.
    if (i + 1 < order.size() && f[order[i + 1]] * f[order[i + 1]] == f[order[i]] * f[order[i]])
      continue;
    if (static_cast<Index>(i) + 1 == h.vertex_count()) break;  // full support, not a cut

    Real cut_weight = 0.0;
    for (const Edge& e : h.edges()) {
      bool inside = false, outside = false;
      for (Index v : e.vertices) (in_set[v] ? inside : outside) = true;
      if (inside && outside) cut_weight += e.weight;
    }
    const Real phi = cut_weight / set_weight;
    if (!found || phi < best.conductance) {
      found = true;
      best.set.assign(order.begin(), order.begin() + i + 1);
      std::sort(best.set.begin(), best.set.end());
      best.cut_weight = cut_weight;
      best.set_weight = set_weight;
      best.conductance = phi;
      best.threshold = f[order[i]] * f[order[i]];
    }
  }

  if (!found) throw Error(ErrorCode::AllZero, "no proper level set to sweep");
  return best;
}

CutResult two_sided_sweep(const Hypergraph& h, VectorRef f) {
  check_length(h, f);
  const Real nrm = norm_w(h, f);
  if (nrm == 0.0) throw Error(ErrorCode::ZeroVector, "cannot sweep the zero vector");
  const Real ones_nrm = std::sqrt(h.total_weight());
  const Real overlap = h.vertex_weights().dot(f);
  if (std::abs(overlap) > 1e-6 * nrm * ones_nrm)
    throw Error(ErrorCode::NotOrthogonal,
                "vector has weighted mean " + std::to_string(overlap / h.total_weight()));

  const CenteredSplit split = center_vector(h, f);
  bool have = false;
  CutResult best;
  if (!split.positive.isZero(0.0)) {
    best = sweep_cut(h, split.positive);
    have = true;
  }
  if (!split.negative.isZero(0.0)) {
    const CutResult neg = sweep_cut(h, (-split.negative).eval());
    if (!have || neg.conductance < best.conductance) best = neg;
  }
  return best;
}

std::pair<CutResult, CheegerCertificate> spectral_partition(const Hypergraph& h,
                                                            const FlowConfig& cfg) {
  const SpectralEstimate est = estimate_gamma2(h, cfg);
  const SpectralEstimate est0 = estimate_gamma2(h.without_mediators(), cfg);
  const CutResult cut = two_sided_sweep(h, est.eigvec);

  CheegerCertificate cert;
  cert.gamma2_hat = est.gamma2;
  cert.gamma2_zero_hat = est0.gamma2;
  cert.phi_cut = cut.conductance;
  cert.lower = 0.5 * est.gamma2;
  cert.upper = 2.0 * std::sqrt(est.gamma2);
  cert.upper_sqrt = std::sqrt(2.0 * est0.gamma2);
  cert.lower_ok = cert.lower <= cert.phi_cut + 1e-12;
  cert.upper_ok = cert.phi_cut <= cert.upper + 1e-12;
  cert.upper_sqrt_ok = cert.phi_cut <= cert.upper_sqrt + 1e-12;
  // Both gamma estimates approach their targets from above, so the exact
  // sandwich gamma2 <= gamma2_zero <= 2 gamma2 is checked with estimator slack.
  const Real slack = 1e-2;
  cert.sandwich_ok = est.gamma2 <= est0.gamma2 + slack * std::max<Real>(1.0, est0.gamma2) &&
                     est0.gamma2 <= 2.0 * est.gamma2 + slack * std::max<Real>(1.0, est.gamma2);
  return {cut, cert};
}

std::pair<CutResult, Real> exact_conductance(const Hypergraph& h) {
  const Index n = h.vertex_count();
  if (n > 20) throw Error(ErrorCode::TooLarge, "exact conductance is guarded to n <= 20");
  if (n < 2) throw Error(ErrorCode::SingleVertex, "no proper cut on a single vertex");

  std::vector<std::uint32_t> edge_masks(h.edge_count(), 0);
  for (Index e = 0; e < h.edge_count(); ++e)
    for (Index v : h.edges()[e].vertices) edge_masks[e] |= 1u << v;
  const std::uint32_t full = (n == 32) ? ~0u : (1u << n) - 1u;

  Real best_obj = std::numeric_limits<Real>::infinity();
  std::uint32_t best_mask = 0;
  // Vertex 0 stays inside S; the objective is symmetric under complement.
  for (std::uint32_t mask = 1; mask < full; mask += 2) {
    Real cut = 0.0;
    for (Index e = 0; e < h.edge_count(); ++e) {
      const std::uint32_t overlap = edge_masks[e] & mask;
      if (overlap != 0u && overlap != edge_masks[e]) cut += h.edges()[e].weight;
    }
    Real ws = 0.0;
    for (Index u = 0; u < n; ++u)
      if (mask >> u & 1u) ws += h.vertex_weight(u);
    const Real obj = std::max(cut / ws, cut / (h.total_weight() - ws));
    if (obj < best_obj) {
      best_obj = obj;
      best_mask = mask;
    }
  }

  // Report the lighter side; its one-sided conductance equals the objective.
  VertexSet side, complement;
  Real ws = 0.0;
  for (Index u = 0; u < n; ++u) {
    if (best_mask >> u & 1u) {
      side.push_back(u);
      ws += h.vertex_weight(u);
    } else {
      complement.push_back(u);
    }
  }
  const VertexSet& witness = (ws <= h.total_weight() - ws) ? side : complement;
  return {conductance(h, witness), best_obj};
}

}  // namespace hmd

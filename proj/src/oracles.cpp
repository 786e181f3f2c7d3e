#include "hmd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hmd/forms.hpp"
#include "hmd/rng.hpp"

namespace hmd::oracles {

namespace {

// delta(X) straight from the definition, with the instance's documented
// summation order: receive entries, deliver entries, gains, weights.
Real instance_delta(const DensestInstance& inst, const std::vector<char>& chosen) {
  Real net = 0.0;
  for (const auto& en : inst.receive) {
    bool all_inside = true;
    for (Index v : en.vertices) {
      bool inside = false;
      for (std::size_t i = 0; i < inst.members.size(); ++i)
        if (inst.members[i] == v && chosen[i]) inside = true;
      all_inside = all_inside && inside;
    }
    if (all_inside) net += en.rate;
  }
  for (const auto& en : inst.deliver) {
    bool touches = false;
    for (Index v : en.vertices)
      for (std::size_t i = 0; i < inst.members.size(); ++i)
        if (inst.members[i] == v && chosen[i]) touches = true;
    if (touches) net -= en.rate;
  }
  Real weight = 0.0;
  for (std::size_t i = 0; i < inst.members.size(); ++i) {
    if (chosen[i]) {
      net += inst.gains[i];
      weight += inst.weights[i];
    }
  }
  return net / weight;
}

}  // namespace

std::pair<VertexSet, Real> brute_densest_subset(const DensestInstance& inst) {
  const std::size_t k = inst.members.size();
  if (k == 0) throw Error(ErrorCode::EmptyClass, "instance has no members");
  if (k > 20) throw Error(ErrorCode::TooLarge, "brute densest subset is guarded to 20 members");

  std::vector<char> chosen(k, 0);
  auto load = [&](std::uint32_t mask) {
    for (std::size_t i = 0; i < k; ++i) chosen[i] = (mask >> i) & 1u;
  };

  Real best = -std::numeric_limits<Real>::infinity();
  const std::uint32_t full = (1u << k) - 1u;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    load(mask);
    best = std::max(best, instance_delta(inst, chosen));
  }
  const Real tol = 1e-12 * std::max<Real>(1.0, std::abs(best));
  std::uint32_t merged = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    load(mask);
    if (instance_delta(inst, chosen) >= best - tol) merged |= mask;
  }
  load(merged);
  const Real delta = instance_delta(inst, chosen);
  VertexSet set;
  for (std::size_t i = 0; i < k; ++i)
    if (chosen[i]) set.push_back(inst.members[i]);
  return {std::move(set), delta};
}

OracleResult brute_conductance(const Hypergraph& h) {
  const Index n = h.vertex_count();
  if (n > 20) throw Error(ErrorCode::TooLarge, "brute conductance is guarded to n <= 20");
  if (n < 2) throw Error(ErrorCode::SingleVertex, "no proper cut on a single vertex");

  const std::uint32_t full = (1u << n) - 1u;
  Real best = std::numeric_limits<Real>::infinity();
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    Real cut = 0.0;
    for (const Edge& e : h.edges()) {
      bool inside = false, outside = false;
      for (Index v : e.vertices) ((mask >> v & 1u) ? inside : outside) = true;
      if (inside && outside) cut += e.weight;
    }
    Real ws = 0.0;
    for (Index u = 0; u < n; ++u)
      if (mask >> u & 1u) ws += h.vertex_weight(u);
    const Real objective = std::max(cut / ws, cut / (h.total_weight() - ws));
    if (objective < best) {
      best = objective;
      best_mask = mask;
    }
  }

  OracleResult out;
  out.value = best;
  out.method = "enumeration";
  Real ws = 0.0;
  for (Index u = 0; u < n; ++u)
    if (best_mask >> u & 1u) ws += h.vertex_weight(u);
  const bool keep = ws <= h.total_weight() - ws;
  for (Index u = 0; u < n; ++u)
    if (((best_mask >> u) & 1u) == static_cast<std::uint32_t>(keep)) out.witness.push_back(u);
  return out;
}

std::vector<Real> dense_eigensolve_2graph(const Hypergraph& h) {
  const Index n = h.vertex_count();
  if (!h.two_uniform_no_mediators())
    throw Error(ErrorCode::NotTwoUniform, "dense eigensolve expects 2-uniform edges with beta0 = 1");
  if (n > 50) throw Error(ErrorCode::TooLarge, "dense eigensolve is guarded to n <= 50");

  Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n);
  for (const Edge& e : h.edges()) {
    const Index u = e.vertices[0], v = e.vertices[1];
    const Real coupling = e.weight / (h.sqrt_vertex_weights()[u] * h.sqrt_vertex_weights()[v]);
    lap(u, v) -= coupling;
    lap(v, u) -= coupling;
  }

  // Cyclic Jacobi sweeps; kept in-repo so the reference is self-contained.
  Real off = 0.0;
  for (Index p = 0; p < n; ++p)
    for (Index q = p + 1; q < n; ++q) off += lap(p, q) * lap(p, q);
  const Real stop = 1e-26 * std::max<Real>(1.0, lap.squaredNorm());
  for (int sweep = 0; sweep < 100 && off > stop; ++sweep) {
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Real apq = lap(p, q);
        if (apq == 0.0) continue;
        const Real theta = (lap(q, q) - lap(p, p)) / (2.0 * apq);
        const Real t = (theta >= 0.0 ? 1.0 : -1.0) /
                       (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const Real c = 1.0 / std::sqrt(t * t + 1.0);
        const Real s = t * c;
        for (Index k = 0; k < n; ++k) {
          const Real akp = lap(k, p), akq = lap(k, q);
          lap(k, p) = c * akp - s * akq;
          lap(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const Real apk = lap(p, k), aqk = lap(q, k);
          lap(p, k) = c * apk - s * aqk;
          lap(q, k) = s * apk + c * aqk;
        }
      }
    }
    off = 0.0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += lap(p, q) * lap(p, q);
  }

  std::vector<Real> eigenvalues(n);
  for (Index i = 0; i < n; ++i) eigenvalues[i] = lap(i, i);
  std::sort(eigenvalues.begin(), eigenvalues.end());
  return eigenvalues;
}

OracleResult brute_rayleigh_min(const Hypergraph& h, int samples, int iters, std::uint64_t seed) {
  const Index n = h.vertex_count();
  if (n > 12) throw Error(ErrorCode::TooLarge, "rayleigh descent is guarded to n <= 12");
  if (n < 2) throw Error(ErrorCode::SingleVertex, "needs at least two vertices");

  Rng rng(seed);
  const Vector& w = h.vertex_weights();
  const Real total = h.total_weight();

  auto project = [&](DensityVector f) {
    const Real mean = w.dot(f) / total;
    f.array() -= mean;
    return f;
  };
  auto ratio = [&](const DensityVector& f) { return discrepancy_ratio(h, f); };

  OracleResult out;
  out.value = std::numeric_limits<Real>::infinity();
  out.method = "random_descent";

  for (int s = 0; s < samples; ++s) {
    DensityVector f(n);
    Real nrm = 0.0;
    do {
      for (Index u = 0; u < n; ++u) f[u] = rng.uniform(-1.0, 1.0);
      f = project(f);
      nrm = norm_w(h, f);
    } while (nrm < 1e-8);
    f /= nrm;
    Real current = ratio(f);

    Real step = 1.0;
    for (int it = 0; it < iters && step > 1e-9; ++it) {
      bool improved = false;
      for (Index u = 0; u < n; ++u) {
        // Coordinate direction re-projected onto the orthogonal sphere.
        DensityVector dir = DensityVector::Zero(n);
        dir[u] = 1.0;
        dir = project(dir);
        for (const Real sign : {1.0, -1.0}) {
          DensityVector cand = f + sign * step * dir;
          const Real cn = norm_w(h, cand);
          if (cn < 1e-10) continue;
          cand /= cn;
          const Real value = ratio(cand);
          if (value < current) {
            current = value;
            f = std::move(cand);
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }

    if (current < out.value) {
      out.value = current;
      out.witness_vector = f;
    }
  }
  return out;
}

}  // namespace hmd::oracles

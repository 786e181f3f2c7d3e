#include "hmd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hmd/forms.hpp"
#include "hmd/rng.hpp"

namespace hmd {

namespace {

Real step_increase_threshold(Real dt) { return 1e-9 + 10.0 * dt * dt; }

// One monotone integration attempt at a fixed dt. Returns false on a
// monotonicity violation (caller halves dt and retries).
bool integrate_once(DiffusionEngine& engine, const Hypergraph& h, const DensityVector& start,
                    const FlowConfig& cfg, Real dt, FlowResult& out) {
  const Real total_w = h.total_weight();
  const Real threshold = step_increase_threshold(dt);
  const auto steps_planned = static_cast<long>(std::ceil(cfg.t_max / dt));
  const long stride = std::max<long>(1, steps_planned / 2000);

  DensityVector f = start;
  out.trajectory.clear();
  out.max_step_increase = 0.0;
  out.converged = false;

  const Vector& wv = h.vertex_weights();
  auto weighted_residual = [&](const DensityVector& g, const DensityVector& rg, Real ray_g,
                               Real norm2_g) {
    Real acc = 0.0;
    for (Index u = 0; u < g.size(); ++u) {
      const Real d = rg[u] + ray_g * g[u];  // L_w g - ray g = -(r + ray g)
      acc += wv[u] * d * d;
    }
    return std::sqrt(acc / norm2_g);
  };

  Real norm2 = inner_w(h, f, f);
  DensityVector r = engine.rate(f, cfg.eps_eq);
  Real ray = -inner_w(h, f, r) / norm2;
  Real residual = weighted_residual(f, r, ray, norm2);
  out.trajectory.push_back({0.0, ray, std::sqrt(norm2)});

  long step = 0;
  while (step * dt < cfg.t_max && residual > cfg.tol_residual) {
    ++step;
    f += dt * r;
    const Real mean = wv.dot(f) / total_w;
    f.array() -= mean;
    norm2 = inner_w(h, f, f);
    if (norm2 <= 0.0) throw Error(ErrorCode::ZeroVector, "flow collapsed to the zero vector");
    if (cfg.renormalize) {
      f /= std::sqrt(norm2);
      norm2 = 1.0;
    }
    r = engine.rate(f, cfg.eps_eq);
    const Real ray_next = -inner_w(h, f, r) / norm2;
    out.max_step_increase = std::max(out.max_step_increase, ray_next - ray);
    if (ray_next > ray + threshold) return false;
    ray = ray_next;
    residual = weighted_residual(f, r, ray, norm2);
    if (step % stride == 0) out.trajectory.push_back({step * dt, ray, std::sqrt(norm2)});
  }

  if (out.trajectory.back().t != step * dt)
    out.trajectory.push_back({step * dt, ray, std::sqrt(norm2)});
  out.f = std::move(f);
  out.final_rayleigh = ray;
  out.residual = residual;
  out.converged = residual <= cfg.tol_residual;
  return true;
}

}  // namespace

DensityVector project_orthogonal(const Hypergraph& h, VectorRef f) {
  check_length(h, f);
  const Real mean = h.vertex_weights().dot(f) / h.total_weight();
  return f.array() - mean;
}

Real rayleigh(const Hypergraph& h, VectorRef f) {
  const Real norm2 = inner_w(h, f, f);
  if (norm2 == 0.0) throw Error(ErrorCode::ZeroVector, "Rayleigh quotient of the zero vector");
  DiffusionEngine engine(h);
  return -inner_w(h, f, engine.rate(f)) / norm2;
}

FlowResult integrate(const Hypergraph& h, VectorRef f0, const FlowConfig& cfg) {
  check_length(h, f0);
  if (f0.isZero(0.0)) throw Error(ErrorCode::ZeroVector, "integration start is zero");

  DensityVector start = project_orthogonal(h, f0);
  const Real start_norm = norm_w(h, start);
  if (start_norm <= 1e-14 * norm_w(h, f0))
    throw Error(ErrorCode::ZeroVector, "integration start is parallel to the all-ones vector");
  if (cfg.renormalize) start /= start_norm;

  DiffusionEngine engine(h);
  FlowResult out;
  Real dt = cfg.dt;
  for (int halvings = 0; halvings <= cfg.max_halvings; ++halvings) {
    out.halvings = halvings;
    out.dt_used = dt;
    if (integrate_once(engine, h, start, cfg, dt, out)) return out;
    dt *= 0.5;
  }
  throw Error(ErrorCode::StepTooLarge,
              "Rayleigh quotient kept increasing after " + std::to_string(cfg.max_halvings) +
                  " dt halvings");
}

SpectralEstimate estimate_gamma2(const Hypergraph& h, const FlowConfig& cfg) {
  if (h.vertex_count() < 2)
    throw Error(ErrorCode::SingleVertex, "second eigenvalue needs at least two vertices");

  Rng rng(cfg.seed);
  SpectralEstimate best;
  bool have_best = false;

  for (int restart = 0; restart < std::max(1, cfg.restarts); ++restart) {
    DensityVector f0(h.vertex_count());
    Real nrm = 0.0;
    do {
      for (Index u = 0; u < h.vertex_count(); ++u) f0[u] = rng.uniform(-1.0, 1.0);
      f0 = project_orthogonal(h, f0);
      nrm = norm_w(h, f0);
    } while (nrm < 1e-8);
    f0 /= nrm;

    FlowResult run = integrate(h, f0, cfg);
    best.monotone_ok =
        best.monotone_ok && run.max_step_increase <= 1e-9 + 10.0 * run.dt_used * run.dt_used;
    best.max_step_increase = std::max(best.max_step_increase, run.max_step_increase);
    if (!have_best || run.final_rayleigh < best.gamma2) {
      have_best = true;
      best.gamma2 = run.final_rayleigh;
      best.eigvec = std::move(run.f);
      best.trajectory = std::move(run.trajectory);
      best.dt_used = run.dt_used;
      best.converged = run.converged;
    }
  }

  best.restarts_used = std::max(1, cfg.restarts);
  // Normalize the reported eigenpair exactly once more.
  best.eigvec = project_orthogonal(h, best.eigvec);
  best.eigvec /= norm_w(h, best.eigvec);
  DiffusionEngine engine(h);
  const DensityVector lf = -engine.rate(best.eigvec, cfg.eps_eq);
  best.gamma2 = inner_w(h, best.eigvec, lf);
  best.residual = norm_w(h, (lf - best.gamma2 * best.eigvec).eval());
  return best;
}

DerivativeCheck derivative_identities(const Hypergraph& h, VectorRef f, Real h_step) {
  check_length(h, f);
  if (f.isZero(0.0)) throw Error(ErrorCode::ZeroVector, "derivative check at the zero vector");

  DiffusionEngine engine(h);
  const DensityVector r = engine.rate(f);

  DerivativeCheck out;
  out.h = h_step;

  // The envelope argument behind the analytic derivatives needs the extremal
  // sets and the tie structure of f to survive a step of size h.
  const DensityVector probe = f + h_step * r;
  for (const Edge& e : h.edges()) {
    const EdgeExtrema a = edge_extrema(e, f);
    const EdgeExtrema b = edge_extrema(e, probe);
    if (a.max_set != b.max_set || a.min_set != b.min_set) return out;
  }
  for (Index u = 0; u < h.vertex_count(); ++u) {
    for (Index v = u + 1; v < h.vertex_count(); ++v) {
      if ((f[u] == f[v]) != (probe[u] == probe[v])) return out;
    }
  }
  out.differentiable = true;

  const Real norm2 = inner_w(h, f, f);
  const Real r_norm2 = inner_w(h, r, r);
  const Real f_dot_r = inner_w(h, f, r);

  auto fill = [&](DerivativeCheck::Line& line, Real analytic, auto&& value) {
    line.analytic = analytic;
    const Real at0 = value(0.0);
    line.fd_coarse = (value(h_step) - at0) / h_step;
    line.fd_fine = (value(0.5 * h_step) - at0) / (0.5 * h_step);
    line.err_coarse = std::abs(line.fd_coarse - analytic);
    line.err_fine = std::abs(line.fd_fine - analytic);
  };

  fill(out.norm_sq, 2.0 * f_dot_r, [&](Real t) {
    const DensityVector g = f + t * r;
    return inner_w(h, g, g);
  });
  fill(out.energy, -2.0 * r_norm2, [&](Real t) {
    const DensityVector g = f + t * r;
    return quadratic_form(h, g);
  });
  fill(out.rayleigh,
       -2.0 / (norm2 * norm2) * (norm2 * r_norm2 - f_dot_r * f_dot_r),
       [&](Real t) {
         const DensityVector g = f + t * r;
         return quadratic_form(h, g) / inner_w(h, g, g);
       });
  return out;
}

}  // namespace hmd

#ifndef HMD_SPECTRAL_HPP
#define HMD_SPECTRAL_HPP

#include <cstdint>
#include <vector>

#include "hmd/diffusion.hpp"
#include "hmd/hypergraph.hpp"
#include "hmd/types.hpp"

namespace hmd {

struct FlowConfig {
  Real dt = 0.005;  // 0.01 / lambda_hat, lambda_hat = 2 a crude operator-norm bound
  Real t_max = 200.0;
  Real tol_residual = 1e-6;  // on ||L_w f - R(f) f||_w / ||f||_w
  int restarts = 8;
  std::uint64_t seed = 0;
  bool renormalize = true;
  Real eps_eq = kDefaultEpsEq;
  int max_halvings = 12;  // dt halvings allowed before StepTooLarge
};

struct TrajectorySample {
  Real t = 0.0;
  Real rayleigh = 0.0;
  Real norm_w = 0.0;
};

struct FlowResult {
  DensityVector f;
  std::vector<TrajectorySample> trajectory;
  Real final_rayleigh = 0.0;
  Real residual = 0.0;
  Real dt_used = 0.0;
  int halvings = 0;
  bool converged = false;       // residual dropped below tol before t_max
  Real max_step_increase = 0.0; // worst per-step Rayleigh increase of the final run
};

struct SpectralEstimate {
  Real gamma2 = 0.0;
  DensityVector eigvec;  // ||.||_w = 1, orthogonal to the all-ones vector
  Real residual = 0.0;
  std::vector<TrajectorySample> trajectory;  // best run
  int restarts_used = 0;
  Real dt_used = 0.0;
  bool converged = false;
  Real max_step_increase = 0.0;  // worst per-step increase over all restarts
  bool monotone_ok = true;       // every restart stayed within its step budget
};

// Finite-difference probes of the flow derivatives at a differentiable point.
// `differentiable` is false when the extremal sets or the tie structure of f
// change within the probe step, in which case the lines are not filled.
struct DerivativeCheck {
  struct Line {
    Real analytic = 0.0;
    Real fd_coarse = 0.0;  // forward difference at h
    Real fd_fine = 0.0;    // forward difference at h/2
    Real err_coarse = 0.0;
    Real err_fine = 0.0;
  };
  bool differentiable = false;
  Real h = 0.0;
  Line norm_sq;   // d ||f||_w^2 / dt
  Line energy;    // d <f, L_w f>_w / dt
  Line rayleigh;  // d R_w(f) / dt
};

// f minus its weighted mean along the all-ones direction.
DensityVector project_orthogonal(const Hypergraph& h, VectorRef f);

// <f, L_w f>_w / <f, f>_w via the diffusion operator.
Real rayleigh(const Hypergraph& h, VectorRef f);

// Explicit Euler on f' = df/dt with re-projection (and optional
// renormalization) after every step. A step that raises the Rayleigh quotient
// by more than 1e-9 + 10 dt^2 halves dt and restarts; StepTooLarge is thrown
// once cfg.max_halvings is exhausted.
FlowResult integrate(const Hypergraph& h, VectorRef f0, const FlowConfig& cfg);

// Minimum final Rayleigh value over seeded random restarts; an upper bound on
// the second eigenvalue, with the eigen-residual of the returned vector.
SpectralEstimate estimate_gamma2(const Hypergraph& h, const FlowConfig& cfg);

DerivativeCheck derivative_identities(const Hypergraph& h, VectorRef f, Real h_step);

}  // namespace hmd

#endif

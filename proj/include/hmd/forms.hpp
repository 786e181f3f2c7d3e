#ifndef HMD_FORMS_HPP
#define HMD_FORMS_HPP

#include <map>
#include <optional>
#include <utility>

#include "hmd/hypergraph.hpp"
#include "hmd/rng.hpp"
#include "hmd/types.hpp"

namespace hmd {

// Symmetric pairwise-interaction matrix A_f realizing the diffusion of a
// given density vector. Off-diagonal entries are non-negative; each diagonal
// entry absorbs the slack so that row u sums to w_u. The diagonal may be
// negative when a mediator carries more than its own vertex weight.
struct InteractionMatrix {
  std::map<std::pair<Index, Index>, Real> offdiag;  // keyed (u, v) with u < v
  Vector diag;

  Real at(Index u, Index v) const;
  Real row_sum(Index u) const;
};

// A vertex subset with its cut data: conductance = cut_weight / set_weight.
struct CutResult {
  VertexSet set;
  Real cut_weight = 0.0;
  Real set_weight = 0.0;
  Real conductance = 0.0;
  std::optional<Real> threshold;
};

// Mediator-weighted energy of a density vector:
//   sum_e w_e { beta0 (max-min)^2 + sum_j beta_j [(max-f_j)^2 + (f_j-min)^2] }.
// Zero exactly when f is constant on every edge.
Real quadratic_form(const Hypergraph& h, VectorRef f);

// Same energy with every beta0 forced to 1: sum_e w_e (max-min)^2.
Real quadratic_form_q0(const Hypergraph& h, VectorRef f);

// quadratic_form(f) / ||f||_w^2.
Real discrepancy_ratio(const Hypergraph& h, VectorRef f);

// Conductance of a nonempty proper subset. An edge is cut iff it meets both
// the set and its complement.
CutResult conductance(const Hypergraph& h, const VertexSet& set);

// Canonical interaction matrix: each edge's mass split uniformly over the
// admissible pairs (direct mass over max_set x min_set, mediator mass over
// max_set x {j} and {j} x min_set). Edges on which f is constant put all of
// their mass on the diagonal.
InteractionMatrix interaction_matrix(const Hypergraph& h, VectorRef f);

// A random feasible split of the same masses; any such split satisfies the
// quadratic identity, which the property tests exercise.
InteractionMatrix interaction_matrix_random(const Hypergraph& h, VectorRef f, Rng& rng);

// f' (W - A) f for a given interaction matrix.
Real interaction_quadratic(const Hypergraph& h, const InteractionMatrix& a, VectorRef f);

// |f' (W - A_f) f - quadratic_form(f)| with the canonical matrix.
Real verify_quadratic_identity(const Hypergraph& h, VectorRef f);

}  // namespace hmd

#endif

#ifndef HMD_PARTITION_HPP
#define HMD_PARTITION_HPP

#include <utility>

#include "hmd/forms.hpp"
#include "hmd/hypergraph.hpp"
#include "hmd/spectral.hpp"
#include "hmd/types.hpp"

namespace hmd {

// f recentred at a weighted median c and split into its positive and negative
// parts. Both supports carry at most half the total vertex weight.
struct CenteredSplit {
  Real center = 0.0;
  DensityVector shifted;   // g = f - c
  DensityVector positive;  // max(g, 0)
  DensityVector negative;  // min(g, 0)
};

struct CheegerCertificate {
  Real gamma2_hat = 0.0;       // flow estimate on the given edges
  Real gamma2_zero_hat = 0.0;  // flow estimate with mediators disabled
  Real phi_cut = 0.0;          // conductance of the returned cut
  Real lower = 0.0;            // gamma2_hat / 2
  Real upper = 0.0;            // 2 sqrt(gamma2_hat)
  Real upper_sqrt = 0.0;       // sqrt(2 gamma2_zero_hat)
  bool lower_ok = false;       // lower <= phi_cut
  bool upper_ok = false;       // phi_cut <= upper
  bool upper_sqrt_ok = false;  // phi_cut <= upper_sqrt
  bool sandwich_ok = false;    // gamma2_hat <= gamma2_zero_hat <= 2 gamma2_hat (estimator slack)
};

// c is the smallest value with w({f > c}) <= w(V)/2; then automatically
// w({f < c}) <= w(V)/2 as well (lower weighted median).
CenteredSplit center_vector(const Hypergraph& h, VectorRef f);

// Best threshold cut over the level sets {u : f_u^2 >= t}, t ranging over the
// distinct positive squared entries. The returned set is inside supp(f) and
// its conductance is at most sqrt(2 Q0(f) / ||f||_w^2).
CutResult sweep_cut(const Hypergraph& h, VectorRef f);

// Centers f, sweeps the positive and negative parts separately and returns
// the better cut; requires f orthogonal to the all-ones vector (within
// 1e-6 relative). The returned set weight is at most w(V)/2.
CutResult two_sided_sweep(const Hypergraph& h, VectorRef f);

// End-to-end partitioner: eigenvector estimate, two-sided sweep, and the
// certificate bounds derived from the two flow estimates.
std::pair<CutResult, CheegerCertificate> spectral_partition(const Hypergraph& h,
                                                            const FlowConfig& cfg);

// Exhaustive minimizer of max{phi(S), phi(V \ S)} over nonempty proper
// subsets; the witness is the lighter side. Guarded to n <= 20.
std::pair<CutResult, Real> exact_conductance(const Hypergraph& h);

}  // namespace hmd

#endif

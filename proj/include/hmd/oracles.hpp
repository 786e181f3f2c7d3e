#ifndef HMD_ORACLES_HPP
#define HMD_ORACLES_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hmd/diffusion.hpp"
#include "hmd/hypergraph.hpp"
#include "hmd/types.hpp"

// Brute-force references used by tests and the acceptance suite. These share
// no code with the production paths they check beyond the core types.
namespace hmd::oracles {

struct OracleResult {
  Real value = 0.0;
  VertexSet witness;
  Vector witness_vector;
  std::string method;
};

// Exhaustive maximal densest subset: every nonempty subset evaluated from the
// definition, maximizers within 1e-12 of the best merged. Guarded to 20
// members.
std::pair<VertexSet, Real> brute_densest_subset(const DensestInstance& inst);

// Exhaustive hypergraph conductance min_{S} max{phi(S), phi(V\S)} with a
// witness set. Guarded to n <= 20.
OracleResult brute_conductance(const Hypergraph& h);

// All eigenvalues (ascending) of the normalized Laplacian of a 2-uniform
// mediator-free hypergraph, via an in-repo cyclic Jacobi sweep. Guarded to
// n <= 50.
std::vector<Real> dense_eigensolve_2graph(const Hypergraph& h);

// Random-restart coordinate descent on the discrepancy ratio over the sphere
// orthogonal to the all-ones vector. Uses the quadratic form only, never the
// diffusion operator, so it independently upper-bounds the second eigenvalue.
// Guarded to n <= 12.
OracleResult brute_rayleigh_min(const Hypergraph& h, int samples, int iters, std::uint64_t seed);

}  // namespace hmd::oracles

#endif

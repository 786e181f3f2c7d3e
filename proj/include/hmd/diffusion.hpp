#ifndef HMD_DIFFUSION_HPP
#define HMD_DIFFUSION_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "hmd/hypergraph.hpp"
#include "hmd/types.hpp"

namespace hmd {

// Default tie tolerance for grouping vertices into equivalence classes,
// relative to the span of the density vector.
inline constexpr Real kDefaultEpsEq = 1e-9;

// Per-edge and per-vertex flow rates of the current state:
//   receive_rate[e]  total rate absorbed by the minimum-density vertices of e,
//   deliver_rate[e]  total rate emitted by the maximum-density vertices of e,
//   mediator_rate[u] net rate received by u across all edges mediating it.
// Globally sum(receive - deliver) + sum(mediator) = 0: the system is closed.
struct EdgeConstants {
  Vector receive_rate;   // >= 0, one per edge
  Vector deliver_rate;   // >= 0, one per edge
  Vector mediator_rate;  // any sign, one per vertex
};

// A densest-subset problem over one equivalence class. A subset X collects a
// receive entry when all of the entry's vertices lie in X, pays a deliver
// entry when any of its vertices lies in X, and collects gains[i] for every
// chosen member. The goal value of X is that net rate divided by the weight
// of X.
//
// Evaluation order is part of the contract so that independent solvers agree
// bit-for-bit: receive entries in stored order, then deliver entries in
// stored order, then gains in member order; weights summed in member order.
struct DensestInstance {
  VertexSet members;          // one equivalence class, ascending vertex ids
  std::vector<Real> weights;  // aligned with members, all > 0
  std::vector<Real> gains;    // aligned with members

  struct Entry {
    Index edge = -1;  // originating edge id, -1 for synthetic instances
    Real rate = 0.0;
    VertexSet vertices;  // subset of members
  };
  std::vector<Entry> receive;
  std::vector<Entry> deliver;

  VertexSet active_edges() const;
};

struct PeelStep {
  VertexSet set;  // maximal densest subset at this stage
  Real density = 0.0;
};

struct ClassReport {
  VertexSet members;
  std::vector<PeelStep> peels;  // densities strictly decrease along the sequence
};

// The derivative r = df/dt together with the certificate that produced it.
struct DerivativeReport {
  DensityVector rate;
  EdgeConstants constants;
  std::vector<ClassReport> classes;
};

// Partition of vertices by value: sort and split where the gap between
// consecutive values exceeds eps (absolute). eps = 0 groups exact ties only.
std::vector<VertexSet> equivalence_classes(VectorRef f, Real eps);

EdgeConstants edge_constants(const Hypergraph& h, VectorRef f);

// Maximal subset maximizing the net-rate density, together with its density.
// Exhaustive below enumeration_limit members, parametric min-cut above it.
// "Maximal" means the union of all maximizers (ties within 1e-12 of the best).
std::pair<VertexSet, Real> densest_subset(const DensestInstance& inst,
                                          std::size_t enumeration_limit = 20);

// First-stage densest instances, one per equivalence class of f.
std::vector<DensestInstance> densest_instances(const Hypergraph& h, VectorRef f,
                                               Real eps_eq = kDefaultEpsEq);

// Reusable derivative computer; keeps scratch buffers so repeated evaluation
// (for example inside an integrator) does not allocate.
class DiffusionEngine {
 public:
  explicit DiffusionEngine(const Hypergraph& h);

  // r = df/dt. The reference stays valid until the next call.
  const DensityVector& rate(VectorRef f, Real eps_eq = kDefaultEpsEq);

  DerivativeReport report(VectorRef f, Real eps_eq = kDefaultEpsEq);

  const Hypergraph& hypergraph() const { return *h_; }

 private:
  void prepare(VectorRef f, Real eps_eq);
  void run_classes(VectorRef f, std::vector<ClassReport>* log);

  const Hypergraph* h_;
  std::vector<EdgeExtrema> extrema_;
  Vector receive_, deliver_, mediator_;
  DensityVector rate_out_;
  std::vector<Index> order_;
  std::vector<int> class_id_;
  std::vector<std::pair<int, int>> class_ranges_;  // [begin, end) into order_
  std::vector<std::vector<int>> class_receive_edges_;
  std::vector<std::vector<int>> class_deliver_edges_;
  VertexSet members_buf_;
};

DerivativeReport derivative(const Hypergraph& h, VectorRef f, Real eps_eq = kDefaultEpsEq);

// L_w f = -df/dt.
DensityVector apply_operator(const Hypergraph& h, VectorRef f, Real eps_eq = kDefaultEpsEq);

}  // namespace hmd

#endif

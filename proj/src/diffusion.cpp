#include "hmd/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace hmd {

namespace {

constexpr Real kTieTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Local (per equivalence class) instances. Member indices are positions in
// the class member list; entry vertex lists are kept ascending.

struct LocalEntry {
  Real rate = 0.0;
  std::vector<int> verts;
};

struct LocalInstance {
  std::vector<Real> weights;
  std::vector<Real> gains;
  std::vector<LocalEntry> receive;
  std::vector<LocalEntry> deliver;

  int size() const { return static_cast<int>(weights.size()); }
};

// Dense view over the still-alive members, with entries as bitmasks.
struct MaskView {
  std::vector<Real> weights;
  std::vector<Real> gains;
  std::vector<std::pair<Real, std::uint32_t>> receive;
  std::vector<std::pair<Real, std::uint32_t>> deliver;

  Real eval(std::uint32_t mask) const {
    Real net = 0.0;
    for (const auto& [rate, em] : receive)
      if ((em & mask) == em) net += rate;
    for (const auto& [rate, em] : deliver)
      if ((em & mask) != 0u) net -= rate;
    Real w = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (mask >> i & 1u) {
        net += gains[i];
        w += weights[i];
      }
    }
    return net / w;
  }
};

// Maximal densest subset by exhaustive enumeration: the union of every subset
// whose value ties the maximum within kTieTolerance.
std::pair<std::uint32_t, Real> solve_enumeration(const MaskView& view, int k) {
  const std::uint32_t full = (1u << k) - 1u;
  Real best = -std::numeric_limits<Real>::infinity();
  for (std::uint32_t mask = 1; mask <= full; ++mask) best = std::max(best, view.eval(mask));
  const Real tol = kTieTolerance * std::max<Real>(1.0, std::abs(best));
  std::uint32_t merged = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask)
    if (view.eval(mask) >= best - tol) merged |= mask;
  return {merged, view.eval(merged)};
}

// ---------------------------------------------------------------------------
// Parametric min-cut path for classes too large to enumerate. The selection
// problem "collect receive entries fully inside X, pay deliver entries touched
// by X, collect per-member gains" is supermodular, so each Dinkelbach step is
// a single s-t min cut on a project-selection network.

class MaxFlow {
 public:
  explicit MaxFlow(int n) : adj_(n) {}

  void add_edge(int u, int v, Real cap) {
    adj_[u].push_back({v, static_cast<int>(adj_[v].size()), cap});
    adj_[v].push_back({u, static_cast<int>(adj_[u].size()) - 1, 0.0});
  }

  Real solve(int s, int t, Real eps) {
    Real flow = 0.0;
    while (bfs(s, t, eps)) {
      iter_.assign(adj_.size(), 0);
      while (true) {
        Real pushed = dfs(s, t, std::numeric_limits<Real>::infinity(), eps);
        if (pushed <= 0.0) break;
        flow += pushed;
      }
    }
    return flow;
  }

  // Vertices with a residual path to t (the minimal sink side of the cut).
  std::vector<char> sink_side(int t, Real eps) const {
    std::vector<char> in(adj_.size(), 0);
    std::queue<int> q;
    in[t] = 1;
    q.push(t);
    while (!q.empty()) {
      int w = q.front();
      q.pop();
      for (const Arc& a : adj_[w]) {
        // Twin of a is the arc a.to -> w; positive twin capacity means a.to
        // can still step onto w.
        const Arc& twin = adj_[a.to][a.rev];
        if (!in[a.to] && twin.cap > eps) {
          in[a.to] = 1;
          q.push(a.to);
        }
      }
    }
    return in;
  }

 private:
  struct Arc {
    int to;
    int rev;
    Real cap;
  };

  bool bfs(int s, int t, Real eps) {
    level_.assign(adj_.size(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const Arc& a : adj_[u]) {
        if (a.cap > eps && level_[a.to] < 0) {
          level_[a.to] = level_[u] + 1;
          q.push(a.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  Real dfs(int u, int t, Real limit, Real eps) {
    if (u == t) return limit;
    for (int& i = iter_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
      Arc& a = adj_[u][i];
      if (a.cap > eps && level_[a.to] == level_[u] + 1) {
        Real pushed = dfs(a.to, t, std::min(limit, a.cap), eps);
        if (pushed > 0.0) {
          a.cap -= pushed;
          adj_[a.to][a.rev].cap += pushed;
          return pushed;
        }
      }
    }
    return 0.0;
  }

  std::vector<std::vector<Arc>> adj_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

Real eval_subset(const LocalInstance& inst, const std::vector<char>& in_set, Real* weight_out) {
  Real net = 0.0;
  for (const LocalEntry& en : inst.receive) {
    bool all = true;
    for (int v : en.verts)
      if (!in_set[v]) {
        all = false;
        break;
      }
    if (all) net += en.rate;
  }
  for (const LocalEntry& en : inst.deliver) {
    for (int v : en.verts)
      if (in_set[v]) {
        net -= en.rate;
        break;
      }
  }
  Real w = 0.0;
  for (int i = 0; i < inst.size(); ++i) {
    if (in_set[i]) {
      net += inst.gains[i];
      w += inst.weights[i];
    }
  }
  if (weight_out != nullptr) *weight_out = w;
  return net;
}

// Maximal maximizer of net(X) - delta * w(X) over subsets of the alive
// members; the maximal source side of the min cut is the complement of the
// minimal sink side.
std::vector<char> max_profit_subset(const LocalInstance& inst, const std::vector<char>& alive,
                                    Real delta) {
  std::vector<int> dense;
  std::vector<int> pos(inst.size(), -1);
  for (int i = 0; i < inst.size(); ++i) {
    if (alive[i]) {
      pos[i] = static_cast<int>(dense.size());
      dense.push_back(i);
    }
  }
  const int k = static_cast<int>(dense.size());
  const int source = 0, sink = 1;
  int next_node = 2 + k;
  Real cap_scale = 1.0;

  struct PendingEdge {
    int u, v;
    Real cap;
  };
  std::vector<PendingEdge> edges;
  auto member_node = [&](int local) { return 2 + pos[local]; };

  for (int i = 0; i < k; ++i) {
    const Real value = inst.gains[dense[i]] - delta * inst.weights[dense[i]];
    if (value > 0.0)
      edges.push_back({source, member_node(dense[i]), value});
    else if (value < 0.0)
      edges.push_back({member_node(dense[i]), sink, -value});
    cap_scale = std::max(cap_scale, std::abs(value));
  }
  const Real inf = std::numeric_limits<Real>::infinity();
  for (const LocalEntry& en : inst.receive) {
    if (en.rate <= 0.0) continue;
    const int node = next_node++;
    edges.push_back({source, node, en.rate});
    for (int v : en.verts) edges.push_back({node, member_node(v), inf});
    cap_scale = std::max(cap_scale, en.rate);
  }
  for (const LocalEntry& en : inst.deliver) {
    if (en.rate <= 0.0) continue;
    const int node = next_node++;
    edges.push_back({node, sink, en.rate});
    for (int v : en.verts) edges.push_back({member_node(v), node, inf});
    cap_scale = std::max(cap_scale, en.rate);
  }

  Real finite_total = 1.0;
  for (const PendingEdge& e : edges)
    if (std::isfinite(e.cap)) finite_total += e.cap;

  MaxFlow flow(next_node);
  for (const PendingEdge& e : edges)
    flow.add_edge(e.u, e.v, std::isfinite(e.cap) ? e.cap : 2.0 * finite_total);

  const Real eps = 1e-12 * cap_scale;
  flow.solve(source, sink, eps);
  const std::vector<char> in_sink = flow.sink_side(sink, eps);

  std::vector<char> chosen(inst.size(), 0);
  for (int i = 0; i < k; ++i)
    if (!in_sink[2 + i]) chosen[dense[i]] = 1;
  return chosen;
}

std::pair<std::vector<char>, Real> solve_mincut(const LocalInstance& inst,
                                                const std::vector<char>& alive) {
  std::vector<char> best = alive;
  Real weight = 0.0;
  Real delta = eval_subset(inst, best, &weight) / weight;
  for (int round = 0; round < 64; ++round) {
    std::vector<char> candidate = max_profit_subset(inst, alive, delta);
    bool empty = true;
    for (int i = 0; i < inst.size(); ++i) empty = empty && !candidate[i];
    if (empty) break;
    const Real value = eval_subset(inst, candidate, &weight) / weight;
    const bool improved = value > delta + 1e-15 * std::max<Real>(1.0, std::abs(delta));
    best = std::move(candidate);
    delta = value;
    if (!improved) break;
  }
  return {std::move(best), delta};
}

// One peel stage on a live instance: returns the maximal densest subset among
// the alive members and its density.
std::pair<std::vector<char>, Real> solve_stage(const LocalInstance& inst,
                                               const std::vector<char>& alive, int alive_count,
                                               std::size_t enumeration_limit) {
  if (alive_count == 0) throw Error(ErrorCode::EmptyClass, "densest subset of an empty class");
  enumeration_limit = std::min<std::size_t>(enumeration_limit, 25);  // mask width guard
  if (static_cast<std::size_t>(alive_count) > enumeration_limit && alive_count > 1)
    return solve_mincut(inst, alive);

  std::vector<int> dense;
  for (int i = 0; i < inst.size(); ++i)
    if (alive[i]) dense.push_back(i);
  std::vector<int> pos(inst.size(), -1);
  for (int d = 0; d < static_cast<int>(dense.size()); ++d) pos[dense[d]] = d;

  MaskView view;
  view.weights.reserve(dense.size());
  view.gains.reserve(dense.size());
  for (int i : dense) {
    view.weights.push_back(inst.weights[i]);
    view.gains.push_back(inst.gains[i]);
  }
  for (const LocalEntry& en : inst.receive) {
    std::uint32_t mask = 0;
    for (int v : en.verts) mask |= 1u << pos[v];
    view.receive.emplace_back(en.rate, mask);
  }
  for (const LocalEntry& en : inst.deliver) {
    std::uint32_t mask = 0;
    for (int v : en.verts) mask |= 1u << pos[v];
    view.deliver.emplace_back(en.rate, mask);
  }

  auto [mask, delta] = solve_enumeration(view, static_cast<int>(dense.size()));
  std::vector<char> chosen(inst.size(), 0);
  for (int d = 0; d < static_cast<int>(dense.size()); ++d)
    if (mask >> d & 1u) chosen[dense[d]] = 1;
  return {std::move(chosen), delta};
}

// Removes the peeled set from a live instance: collected receive entries and
// touched deliver entries drop out; split receive entries keep only their
// remaining vertices, which is where the leftover inflow must land.
void remove_peeled(LocalInstance& inst, const std::vector<char>& peeled) {
  std::erase_if(inst.receive, [&](LocalEntry& en) {
    bool all = true;
    for (int v : en.verts) all = all && peeled[v];
    if (all) return true;
    std::erase_if(en.verts, [&](int v) { return peeled[v] != 0; });
    return false;
  });
  std::erase_if(inst.deliver, [&](const LocalEntry& en) {
    for (int v : en.verts)
      if (peeled[v]) return true;
    return false;
  });
}

// Full peel sequence; assigns one density per member via `assign`.
template <typename Assign>
void peel_class(LocalInstance& inst, std::size_t enumeration_limit, Assign&& assign,
                std::vector<PeelStep>* log, const VertexSet& members) {
  std::vector<char> alive(inst.size(), 1);
  int alive_count = inst.size();
  while (alive_count > 0) {
    auto [peeled, delta] = solve_stage(inst, alive, alive_count, enumeration_limit);
    if (log != nullptr) log->push_back({{}, delta});
    for (int i = 0; i < inst.size(); ++i) {
      if (peeled[i]) {
        assign(i, delta);
        alive[i] = 0;
        --alive_count;
        if (log != nullptr) log->back().set.push_back(members[i]);
      }
    }
    remove_peeled(inst, peeled);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

VertexSet DensestInstance::active_edges() const {
  VertexSet ids;
  for (const Entry& en : receive)
    if (en.edge >= 0) ids.push_back(en.edge);
  for (const Entry& en : deliver)
    if (en.edge >= 0) ids.push_back(en.edge);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<VertexSet> equivalence_classes(VectorRef f, Real eps) {
  std::vector<Index> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    return f[a] < f[b] || (f[a] == f[b] && a < b);
  });
  std::vector<VertexSet> classes;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || f[order[i]] - f[order[i - 1]] > eps) classes.emplace_back();
    classes.back().push_back(order[i]);
  }
  for (VertexSet& cls : classes) std::sort(cls.begin(), cls.end());
  return classes;
}

EdgeConstants edge_constants(const Hypergraph& h, VectorRef f) {
  check_length(h, f);
  EdgeConstants out;
  out.receive_rate = Vector::Zero(h.edge_count());
  out.deliver_rate = Vector::Zero(h.edge_count());
  out.mediator_rate = Vector::Zero(h.vertex_count());
  for (Index e = 0; e < h.edge_count(); ++e) {
    const Edge& edge = h.edges()[e];
    const EdgeExtrema ex = edge_extrema(edge, f);
    Real in = edge.beta0 * (ex.fmax - ex.fmin);
    Real outr = in;
    for (const auto& [j, beta] : edge.beta) {
      in += beta * (f[j] - ex.fmin);
      outr += beta * (ex.fmax - f[j]);
      out.mediator_rate[j] += edge.weight * beta * (ex.fmax + ex.fmin - 2.0 * f[j]);
    }
    out.receive_rate[e] = edge.weight * in;
    out.deliver_rate[e] = edge.weight * outr;
  }
  return out;
}

std::pair<VertexSet, Real> densest_subset(const DensestInstance& inst,
                                          std::size_t enumeration_limit) {
  if (inst.members.empty()) throw Error(ErrorCode::EmptyClass, "instance has no members");
  if (inst.weights.size() != inst.members.size() || inst.gains.size() != inst.members.size())
    throw Error(ErrorCode::LengthMismatch, "weights/gains must align with members");

  std::vector<int> local_of;
  Index max_id = inst.members.back();
  local_of.assign(max_id + 1, -1);
  for (std::size_t i = 0; i < inst.members.size(); ++i) local_of[inst.members[i]] = static_cast<int>(i);

  LocalInstance local;
  local.weights = inst.weights;
  local.gains = inst.gains;
  auto to_local = [&](const VertexSet& verts) {
    std::vector<int> out;
    out.reserve(verts.size());
    for (Index v : verts) {
      if (v < 0 || v > max_id || local_of[v] < 0)
        throw Error(ErrorCode::VertexOutOfRange,
                    "entry vertex " + std::to_string(v) + " is not an instance member");
      out.push_back(local_of[v]);
    }
    return out;
  };
  for (const auto& en : inst.receive) local.receive.push_back({en.rate, to_local(en.vertices)});
  for (const auto& en : inst.deliver) local.deliver.push_back({en.rate, to_local(en.vertices)});

  std::vector<char> alive(local.size(), 1);
  auto [chosen, delta] = solve_stage(local, alive, local.size(), enumeration_limit);
  VertexSet set;
  for (int i = 0; i < local.size(); ++i)
    if (chosen[i]) set.push_back(inst.members[i]);
  return {std::move(set), delta};
}

// ---------------------------------------------------------------------------

DiffusionEngine::DiffusionEngine(const Hypergraph& h) : h_(&h) {
  const Index m = h.edge_count();
  extrema_.resize(m);
  receive_.resize(m);
  deliver_.resize(m);
  mediator_.resize(h.vertex_count());
  rate_out_.resize(h.vertex_count());
  order_.resize(h.vertex_count());
  class_id_.resize(h.vertex_count());
}

void DiffusionEngine::prepare(VectorRef f, Real eps_eq) {
  const Hypergraph& h = *h_;
  check_length(h, f);
  const auto& edges = h.edges();

  mediator_.setZero();
  for (Index e = 0; e < h.edge_count(); ++e) {
    const Edge& edge = edges[e];
    EdgeExtrema& ex = extrema_[e];
    ex.max_set.clear();
    ex.min_set.clear();
    ex.fmax = f[edge.vertices.front()];
    ex.fmin = ex.fmax;
    for (Index v : edge.vertices) {
      ex.fmax = std::max(ex.fmax, f[v]);
      ex.fmin = std::min(ex.fmin, f[v]);
    }
    if (ex.constant()) {
      ex.max_set = edge.vertices;
      ex.min_set = edge.vertices;
    } else {
      for (Index v : edge.vertices) {
        if (f[v] == ex.fmax) ex.max_set.push_back(v);
        if (f[v] == ex.fmin) ex.min_set.push_back(v);
      }
    }

    Real in = edge.beta0 * (ex.fmax - ex.fmin);
    Real outr = in;
    for (const auto& [j, beta] : edge.beta) {
      in += beta * (f[j] - ex.fmin);
      outr += beta * (ex.fmax - f[j]);
      mediator_[j] += edge.weight * beta * (ex.fmax + ex.fmin - 2.0 * f[j]);
    }
    receive_[e] = edge.weight * in;
    deliver_[e] = edge.weight * outr;
  }

  const Real span = f.size() > 0 ? f.maxCoeff() - f.minCoeff() : 0.0;
  const Real eps_abs = eps_eq * span;
  std::iota(order_.begin(), order_.end(), 0);
  std::sort(order_.begin(), order_.end(), [&](Index a, Index b) {
    return f[a] < f[b] || (f[a] == f[b] && a < b);
  });

  class_ranges_.clear();
  for (Index i = 0; i < h.vertex_count(); ++i) {
    if (i == 0 || f[order_[i]] - f[order_[i - 1]] > eps_abs)
      class_ranges_.emplace_back(i, i + 1);
    else
      class_ranges_.back().second = i + 1;
  }
  for (std::size_t c = 0; c < class_ranges_.size(); ++c)
    for (int i = class_ranges_[c].first; i < class_ranges_[c].second; ++i)
      class_id_[order_[i]] = static_cast<int>(c);

  class_receive_edges_.assign(class_ranges_.size(), {});
  class_deliver_edges_.assign(class_ranges_.size(), {});
  for (Index e = 0; e < h.edge_count(); ++e) {
    class_receive_edges_[class_id_[extrema_[e].min_set.front()]].push_back(e);
    class_deliver_edges_[class_id_[extrema_[e].max_set.front()]].push_back(e);
  }
}

void DiffusionEngine::run_classes(VectorRef f, std::vector<ClassReport>* log) {
  (void)f;
  const Hypergraph& h = *h_;
  for (std::size_t c = 0; c < class_ranges_.size(); ++c) {
    const auto [begin, end] = class_ranges_[c];
    const int k = end - begin;

    if (k == 1) {
      const Index u = order_[begin];
      Real net = 0.0;
      for (int e : class_receive_edges_[c]) net += receive_[e];
      for (int e : class_deliver_edges_[c]) net -= deliver_[e];
      net += mediator_[u];
      const Real delta = net / h.vertex_weight(u);
      rate_out_[u] = delta;
      if (log != nullptr) log->push_back({{u}, {{{u}, delta}}});
      continue;
    }

    members_buf_.assign(order_.begin() + begin, order_.begin() + end);
    std::sort(members_buf_.begin(), members_buf_.end());

    LocalInstance local;
    local.weights.reserve(k);
    local.gains.reserve(k);
    std::vector<int> local_of(h.vertex_count(), -1);
    for (int i = 0; i < k; ++i) {
      local_of[members_buf_[i]] = i;
      local.weights.push_back(h.vertex_weight(members_buf_[i]));
      local.gains.push_back(mediator_[members_buf_[i]]);
    }
    for (int e : class_receive_edges_[c]) {
      LocalEntry en;
      en.rate = receive_[e];
      for (Index v : extrema_[e].min_set) en.verts.push_back(local_of[v]);
      local.receive.push_back(std::move(en));
    }
    for (int e : class_deliver_edges_[c]) {
      LocalEntry en;
      en.rate = deliver_[e];
      for (Index v : extrema_[e].max_set) en.verts.push_back(local_of[v]);
      local.deliver.push_back(std::move(en));
    }

    std::vector<PeelStep>* steps = nullptr;
    if (log != nullptr) {
      log->push_back({members_buf_, {}});
      steps = &log->back().peels;
    }
    peel_class(
        local, 20, [&](int i, Real delta) { rate_out_[members_buf_[i]] = delta; }, steps,
        members_buf_);
  }
}

const DensityVector& DiffusionEngine::rate(VectorRef f, Real eps_eq) {
  prepare(f, eps_eq);
  run_classes(f, nullptr);
  return rate_out_;
}

DerivativeReport DiffusionEngine::report(VectorRef f, Real eps_eq) {
  prepare(f, eps_eq);
  DerivativeReport rep;
  run_classes(f, &rep.classes);
  rep.rate = rate_out_;
  rep.constants.receive_rate = receive_;
  rep.constants.deliver_rate = deliver_;
  rep.constants.mediator_rate = mediator_;
  return rep;
}

std::vector<DensestInstance> densest_instances(const Hypergraph& h, VectorRef f, Real eps_eq) {
  check_length(h, f);
  const EdgeConstants constants = edge_constants(h, f);
  const Real span = f.size() > 0 ? f.maxCoeff() - f.minCoeff() : 0.0;
  const std::vector<VertexSet> classes = equivalence_classes(f, eps_eq * span);

  std::vector<int> class_of(h.vertex_count(), -1);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (Index u : classes[c]) class_of[u] = static_cast<int>(c);

  std::vector<DensestInstance> out(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    out[c].members = classes[c];
    for (Index u : classes[c]) {
      out[c].weights.push_back(h.vertex_weight(u));
      out[c].gains.push_back(constants.mediator_rate[u]);
    }
  }
  for (Index e = 0; e < h.edge_count(); ++e) {
    const EdgeExtrema ex = edge_extrema(h.edges()[e], f);
    out[class_of[ex.min_set.front()]].receive.push_back(
        {e, constants.receive_rate[e], ex.min_set});
    out[class_of[ex.max_set.front()]].deliver.push_back(
        {e, constants.deliver_rate[e], ex.max_set});
  }
  return out;
}

DerivativeReport derivative(const Hypergraph& h, VectorRef f, Real eps_eq) {
  DiffusionEngine engine(h);
  return engine.report(f, eps_eq);
}

DensityVector apply_operator(const Hypergraph& h, VectorRef f, Real eps_eq) {
  DiffusionEngine engine(h);
  return -engine.rate(f, eps_eq);
}

}  // namespace hmd

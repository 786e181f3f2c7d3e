#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hmd/diffusion.hpp"
#include "hmd/forms.hpp"
#include "hmd/oracles.hpp"
#include "hmd/rng.hpp"
#include "test_util.hpp"

using namespace hmd;
using namespace hmd::testing;

TEST_CASE("equivalence classes") {
  auto classes = equivalence_classes(vec({1.0, -1.0, 0.0}), 0.0);
  REQUIRE(classes.size() == 3);
  CHECK(classes[0] == VertexSet{1});
  CHECK(classes[1] == VertexSet{2});
  CHECK(classes[2] == VertexSet{0});

  classes = equivalence_classes(vec({0.0, 0.0, 1.0}), 0.0);
  REQUIRE(classes.size() == 2);
  CHECK(classes[0] == VertexSet{0, 1});
  CHECK(classes[1] == VertexSet{2});

  classes = equivalence_classes(vec({0.0, 1e-13, 1.0}), 1e-9);
  REQUIRE(classes.size() == 2);
  CHECK(classes[0] == VertexSet{0, 1});
  CHECK(classes[1] == VertexSet{2});
}

TEST_CASE("edge constants on the fixtures") {
  const EdgeConstants c1 = edge_constants(h1(), vec({1.0, -1.0, 0.0}));
  CHECK(c1.receive_rate[0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(c1.deliver_rate[0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(c1.mediator_rate[2] == 0.0);

  const EdgeConstants flat = edge_constants(h1(), vec({2.0, 2.0, 2.0}));
  CHECK(flat.receive_rate[0] == 0.0);
  CHECK(flat.deliver_rate[0] == 0.0);
  CHECK(flat.mediator_rate.isZero(0.0));

  const EdgeConstants c3 = edge_constants(h3(), vec({0.0, 0.0, 1.0}));
  CHECK(c3.receive_rate[0] == 0.0);
  CHECK(c3.deliver_rate[0] == 0.0);
  CHECK(c3.receive_rate[1] == 1.0);
  CHECK(c3.deliver_rate[1] == 1.0);
}

TEST_CASE("global rate balance of the constants") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const Hypergraph h = random_hypergraph(rng);
    const DensityVector f = random_vector(rng, h.vertex_count(), trial % 3 == 0);
    const EdgeConstants c = edge_constants(h, f);
    for (Index e = 0; e < h.edge_count(); ++e) {
      CHECK(c.receive_rate[e] >= 0.0);
      CHECK(c.deliver_rate[e] >= 0.0);
    }
    const Real balance =
        c.receive_rate.sum() - c.deliver_rate.sum() + c.mediator_rate.sum();
    CHECK(std::abs(balance) <= 1e-9);
  }
}

TEST_CASE("densest subset on the h3 class") {
  // class {a, b} of f = (0, 0, 1): edge {a,c} feeds a, edge {a,b} is inert
  const auto instances = densest_instances(h3(), vec({0.0, 0.0, 1.0}));
  REQUIRE(instances.size() == 2);
  const DensestInstance& low = instances[0];
  REQUIRE(low.members == VertexSet{0, 1});

  const auto [set, delta] = densest_subset(low);
  CHECK(set == VertexSet{0});
  CHECK(delta == doctest::Approx(0.5).epsilon(1e-15));

  // all-zero constants return the whole class at density zero
  DensestInstance zero;
  zero.members = {0, 1, 2};
  zero.weights = {1.0, 2.0, 1.0};
  zero.gains = {0.0, 0.0, 0.0};
  const auto [all, d0] = densest_subset(zero);
  CHECK(all == VertexSet{0, 1, 2});
  CHECK(d0 == 0.0);

  DensestInstance single;
  single.members = {4};
  single.weights = {2.0};
  single.gains = {3.0};
  const auto [s, d] = densest_subset(single);
  CHECK(s == VertexSet{4});
  CHECK(d == 1.5);

  CHECK_THROWS_AS(densest_subset(DensestInstance{}), Error);
}

namespace {

DensestInstance random_instance(Rng& rng, int max_members) {
  DensestInstance inst;
  const int k = rng.uniform_int(1, max_members);
  for (int i = 0; i < k; ++i) {
    inst.members.push_back(i);
    inst.weights.push_back(rng.uniform(0.2, 2.0));
    inst.gains.push_back(rng.bernoulli(0.5) ? rng.uniform(-1.0, 1.0) : 0.0);
  }
  const int entries = rng.uniform_int(0, 6);
  for (int t = 0; t < entries; ++t) {
    DensestInstance::Entry en;
    en.edge = t;
    en.rate = rng.uniform(0.0, 2.0);
    for (int i = 0; i < k; ++i)
      if (rng.bernoulli(0.4)) en.vertices.push_back(i);
    if (en.vertices.empty()) en.vertices.push_back(rng.uniform_int(0, k - 1));
    if (rng.bernoulli(0.5))
      inst.receive.push_back(en);
    else
      inst.deliver.push_back(en);
  }
  return inst;
}

}  // namespace

TEST_CASE("densest subset matches the exhaustive oracle exactly") {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const DensestInstance inst = random_instance(rng, 12);
    const auto [prod_set, prod_delta] = densest_subset(inst);
    const auto [oracle_set, oracle_delta] = oracles::brute_densest_subset(inst);
    CHECK(prod_set == oracle_set);
    CHECK(prod_delta == oracle_delta);  // bit-for-bit
  }
}

TEST_CASE("min-cut solver agrees with enumeration") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const DensestInstance inst = random_instance(rng, 11);
    const auto [enum_set, enum_delta] = densest_subset(inst);
    const auto [cut_set, cut_delta] = densest_subset(inst, 0);  // force the flow path
    CHECK(std::abs(cut_delta - enum_delta) <= 1e-9 * std::max<Real>(1.0, std::abs(enum_delta)));
    CHECK(cut_set == enum_set);
  }
}

TEST_CASE("derivative on the fixtures") {
  const DerivativeReport r1 = derivative(h1(), vec({1.0, -1.0, 0.0}));
  CHECK(r1.rate[0] == doctest::Approx(-1.5).epsilon(1e-15));
  CHECK(r1.rate[1] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(r1.rate[2] == 0.0);

  const DerivativeReport flat = derivative(h2(), vec({5.0, 5.0, 5.0}));
  CHECK(flat.rate.isZero(0.0));

  const DerivativeReport r3 = derivative(h3(), vec({0.0, 0.0, 1.0}));
  CHECK(r3.rate[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r3.rate[1] == 0.0);
  CHECK(r3.rate[2] == doctest::Approx(-1.0).epsilon(1e-15));

  // peel sequence of the low class: {a} at 0.5 then {b} at 0
  REQUIRE(r3.classes.size() == 2);
  const ClassReport& low = r3.classes[0];
  REQUIRE(low.peels.size() == 2);
  CHECK(low.peels[0].set == VertexSet{0});
  CHECK(low.peels[0].density == doctest::Approx(0.5));
  CHECK(low.peels[1].set == VertexSet{1});
  CHECK(low.peels[1].density == 0.0);
}

TEST_CASE("apply_operator fixtures") {
  const DensityVector l0 = apply_operator(h0(), vec({1.0, -1.0}));
  CHECK(l0[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(l0[1] == doctest::Approx(-2.0).epsilon(1e-15));

  const DensityVector l2 = apply_operator(h2(), vec({1.0, 0.0, -1.0}));
  CHECK(l2[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(l2[1] == 0.0);
  CHECK(l2[2] == doctest::Approx(-1.0).epsilon(1e-15));

  CHECK(apply_operator(h1(), vec({3.0, 3.0, 3.0})).isZero(0.0));
}

TEST_CASE("derivative properties on random inputs") {
  Rng rng(123);
  for (int trial = 0; trial < 250; ++trial) {
    const Hypergraph h = random_hypergraph(rng);
    const Index n = h.vertex_count();
    const DensityVector f = random_vector(rng, n, trial % 3 == 0);
    const DerivativeReport rep = derivative(h, f);
    const DensityVector& r = rep.rate;

    // conservation
    CHECK(std::abs(h.vertex_weights().dot(r)) <= 1e-9);

    // peel identity: receive rates land on the slowest receivers, deliver
    // rates leave from the fastest senders
    Real lhs = 0.0;
    for (Index e = 0; e < h.edge_count(); ++e) {
      const EdgeExtrema ex = edge_extrema(h.edges()[e], f);
      Real rmin = r[ex.min_set.front()], rmax = r[ex.max_set.front()];
      for (Index v : ex.min_set) rmin = std::min(rmin, r[v]);
      for (Index v : ex.max_set) rmax = std::max(rmax, r[v]);
      lhs += rep.constants.receive_rate[e] * rmin - rep.constants.deliver_rate[e] * rmax;
    }
    for (Index u = 0; u < n; ++u) lhs += rep.constants.mediator_rate[u] * r[u];
    const Real rnorm2 = inner_w(h, r, r);
    CHECK(std::abs(lhs - rnorm2) <= 1e-9 * std::max<Real>(1.0, rnorm2));

    // energy identity against the quadratic form
    const Real q = quadratic_form(h, f);
    CHECK(std::abs(-inner_w(h, f, r) - q) <= 1e-9 * std::max<Real>(1.0, q));

    // peel densities strictly decrease within every class
    for (const ClassReport& cls : rep.classes) {
      for (std::size_t p = 1; p < cls.peels.size(); ++p)
        CHECK(cls.peels[p].density <
              cls.peels[p - 1].density + 1e-12 * std::max<Real>(1.0, std::abs(cls.peels[p].density)));
    }

    // homogeneity including negative scalings
    const Real a = rng.uniform(-1.5, 1.5);
    const Real b = trial % 2 == 0 ? rng.uniform(0.25, 2.0) : -rng.uniform(0.25, 2.0);
    const DensityVector scaled = (a + (b * f.array())).matrix();
    const DensityVector rs = derivative(h, scaled).rate;
    for (Index u = 0; u < n; ++u)
      CHECK(std::abs(rs[u] - b * r[u]) <= 1e-12 * std::max<Real>(1.0, std::abs(b * r[u])));
  }
}

TEST_CASE("derivative instances match the oracle per class") {
  Rng rng(321);
  for (int trial = 0; trial < 100; ++trial) {
    const Hypergraph h = random_hypergraph(rng);
    const DensityVector f = random_vector(rng, h.vertex_count(), true);
    const DerivativeReport rep = derivative(h, f);
    for (const DensestInstance& inst : densest_instances(h, f)) {
      if (inst.members.size() > 12) continue;
      const auto [set, delta] = oracles::brute_densest_subset(inst);
      // the first peel of the class must agree with the oracle
      for (const ClassReport& cls : rep.classes) {
        if (cls.members == inst.members) {
          REQUIRE(!cls.peels.empty());
          CHECK(cls.peels.front().set == set);
          CHECK(cls.peels.front().density == delta);
        }
      }
    }
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hmd/hypergraph.hpp"
#include "hmd/rng.hpp"
#include "test_util.hpp"

using namespace hmd;
using namespace hmd::testing;

TEST_CASE("build computes vertex weights") {
  const Hypergraph h = h0();
  CHECK(h.vertex_weight(0) == 1.0);
  CHECK(h.vertex_weight(1) == 1.0);

  const Hypergraph g = h1();
  CHECK(g.vertex_weight(0) == 1.0);
  CHECK(g.vertex_weight(1) == 1.0);
  CHECK(g.vertex_weight(2) == 1.0);

  const Hypergraph p = h2();
  CHECK(p.vertex_weight(0) == 1.0);
  CHECK(p.vertex_weight(1) == 2.0);
  CHECK(p.vertex_weight(2) == 1.0);
  CHECK(p.total_weight() == 4.0);
}

TEST_CASE("build rejects malformed input") {
  CHECK_THROWS_WITH_AS(Hypergraph(2, {{{}, 1.0, 1.0, {}}}), doctest::Contains("EmptyEdge"), Error);
  CHECK_THROWS_AS(Hypergraph(2, {{{0, 1}, 0.0, 1.0, {}}}), Error);
  CHECK_THROWS_AS(Hypergraph(2, {{{0, 1}, -1.0, 1.0, {}}}), Error);

  // beta0 = 0.7 with beta_a = 0.7 sums to 1.4
  try {
    Hypergraph(2, {{{0, 1}, 1.0, 0.7, {{0, 0.7}}}});
    FAIL("expected BetaSumMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BetaSumMismatch);
  }

  try {
    Hypergraph(2, {{{0, 1}, 1.0, 1.5, {{0, -0.5}}}});
    FAIL("expected NegativeBeta");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeBeta);
  }

  // vertex 2 exists but no edge touches it
  try {
    Hypergraph(3, {{{0, 1}, 1.0, 1.0, {}}});
    FAIL("expected IsolatedVertex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IsolatedVertex);
  }

  try {
    Hypergraph(2, {{{0, 1}, 1.0, 0.5, {{5, 0.5}}}});
    FAIL("expected an error for beta outside the edge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownBetaVertex);
  }
}

TEST_CASE("beta sum tolerance is 1e-9") {
  CHECK_NOTHROW(Hypergraph(2, {{{0, 1}, 1.0, 1.0 + 0.9e-9, {}}}));
  CHECK_THROWS_AS(Hypergraph(2, {{{0, 1}, 1.0, 1.0 + 1.1e-8, {}}}), Error);
}

TEST_CASE("space transforms") {
  const Hypergraph p = h2();
  const DensityVector f = vec({1.0, 0.0, -1.0});
  const MeasureVector phi = to_measure(p, f);
  CHECK(phi[0] == 1.0);
  CHECK(phi[1] == 0.0);
  CHECK(phi[2] == -1.0);

  const NormalizedVector x = to_normalized(p, vec({1.0, 1.0, 1.0}));
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(x[2] == doctest::Approx(1.0).epsilon(1e-15));

  const Hypergraph single = h0();
  const MeasureVector phi0 = to_measure(single, vec({1.0, -1.0}));
  CHECK(phi0[0] == 1.0);
  CHECK(phi0[1] == -1.0);

  CHECK_THROWS_AS(to_measure(p, vec({1.0, 2.0})), Error);
}

TEST_CASE("weighted inner product") {
  const Hypergraph p = h2();
  CHECK(inner_w(p, vec({1.0, 0.0, -1.0}), vec({1.0, 1.0, 1.0})) == 0.0);
  CHECK(norm_w(p, vec({0.0, 0.0, 0.0})) == 0.0);
  CHECK(norm_w(h0(), vec({1.0, -1.0})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("edge extrema with the constant-edge convention") {
  Edge e;
  e.vertices = {0, 1, 2};

  EdgeExtrema ex = edge_extrema(e, vec({1.0, -1.0, 0.0}));
  CHECK(ex.max_set == VertexSet{0});
  CHECK(ex.min_set == VertexSet{1});

  Edge pair;
  pair.vertices = {0, 1};
  ex = edge_extrema(pair, vec({5.0, 5.0}));
  CHECK(ex.max_set == VertexSet{0, 1});
  CHECK(ex.min_set == VertexSet{0, 1});

  ex = edge_extrema(e, vec({2.0, 2.0, 0.0}));
  CHECK(ex.max_set == VertexSet{0, 1});
  CHECK(ex.min_set == VertexSet{2});
}

TEST_CASE("round trips and isomorphism of the three spaces") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Hypergraph h = random_hypergraph(rng);
    const DensityVector f = random_vector(rng, h.vertex_count());
    const DensityVector g = random_vector(rng, h.vertex_count());

    // plain dot product of normalized vectors matches the weighted product
    const Real direct = to_normalized(h, f).dot(to_normalized(h, g));
    const Real weighted = inner_w(h, f, g);
    CHECK(std::abs(direct - weighted) <= 1e-12 * std::max<Real>(1.0, std::abs(weighted)));

    const DensityVector back = to_density(h, to_measure(h, f));
    for (Index u = 0; u < h.vertex_count(); ++u)
      CHECK(back[u] == doctest::Approx(f[u]).epsilon(1e-15));

    for (const Edge& e : h.edges()) {
      const EdgeExtrema ex = edge_extrema(e, f);
      CHECK(!ex.max_set.empty());
      CHECK(!ex.min_set.empty());
      for (Index v : ex.max_set) CHECK(std::binary_search(e.vertices.begin(), e.vertices.end(), v));
      for (Index v : ex.min_set) CHECK(std::binary_search(e.vertices.begin(), e.vertices.end(), v));
    }
  }
}

TEST_CASE("mediator-free variant keeps weights") {
  const Hypergraph g = h1().without_mediators();
  CHECK(g.edges()[0].beta0 == 1.0);
  CHECK(g.edges()[0].beta.empty());
  CHECK(g.vertex_weight(2) == 1.0);
  CHECK(g.two_uniform_no_mediators() == false);  // the edge has three vertices
  CHECK(h2().two_uniform_no_mediators());
}

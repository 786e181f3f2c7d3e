#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hmd/forms.hpp"
#include "hmd/rng.hpp"
#include "test_util.hpp"

using namespace hmd;
using namespace hmd::testing;

TEST_CASE("quadratic form on the desk fixtures") {
  CHECK(quadratic_form(h1(), vec({1.0, -1.0, 0.0})) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(quadratic_form(h1(), vec({2.0, 2.0, 2.0})) == 0.0);
  CHECK(quadratic_form(h0(), vec({1.0, -1.0})) == 4.0);

  CHECK(quadratic_form_q0(h1(), vec({1.0, -1.0, 0.0})) == 4.0);
  CHECK(quadratic_form_q0(h2(), vec({1.0, 0.0, -1.0})) == 2.0);
  CHECK(quadratic_form_q0(h2(), vec({3.0, 3.0, 3.0})) == 0.0);

  CHECK_THROWS_AS(quadratic_form(h1(), vec({1.0, 2.0})), Error);
}

TEST_CASE("discrepancy ratio") {
  CHECK(discrepancy_ratio(h1(), vec({1.0, -1.0, 0.0})) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(discrepancy_ratio(h0(), vec({1.0, -1.0})) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(discrepancy_ratio(h1(), vec({0.0, 0.0, 0.0})), Error);
}

TEST_CASE("conductance of explicit sets") {
  const CutResult a = conductance(h2(), {0});
  CHECK(a.conductance == 1.0);
  CHECK(a.cut_weight == 1.0);

  const CutResult ab = conductance(h2(), {0, 1});
  CHECK(ab.conductance == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const CutResult s = conductance(h1(), {0, 1});
  CHECK(s.conductance == 0.5);

  CHECK_THROWS_AS(conductance(h2(), {}), Error);
  CHECK_THROWS_AS(conductance(h2(), {0, 1, 2}), Error);
}

TEST_CASE("indicator vectors tie discrepancy to conductance") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const Hypergraph h = random_hypergraph(rng);
    const Index n = h.vertex_count();
    VertexSet set;
    DensityVector chi = DensityVector::Zero(n);
    for (Index u = 0; u < n; ++u) {
      if (rng.bernoulli(0.5)) {
        set.push_back(u);
        chi[u] = 1.0;
      }
    }
    if (set.empty() || static_cast<Index>(set.size()) == n) continue;
    const Real phi = conductance(h, set).conductance;
    const Real ratio = discrepancy_ratio(h, chi);
    CHECK(std::abs(phi - ratio) <= 1e-12 * std::max<Real>(1.0, phi));
  }
}

TEST_CASE("canonical interaction matrix on the fixtures") {
  const InteractionMatrix a = interaction_matrix(h1(), vec({1.0, -1.0, 0.0}));
  CHECK(a.at(0, 1) == 0.5);
  CHECK(a.at(0, 2) == 0.5);
  CHECK(a.at(2, 1) == 0.5);
  CHECK(a.diag[0] == doctest::Approx(0.0));
  CHECK(a.diag[1] == doctest::Approx(0.0));
  CHECK(a.diag[2] == doctest::Approx(0.0));

  const InteractionMatrix c = interaction_matrix(h1(), vec({4.0, 4.0, 4.0}));
  CHECK(c.offdiag.empty());
  CHECK(c.diag[0] == 1.0);  // a_uu = w_u when nothing leaves the diagonal

  const InteractionMatrix b = interaction_matrix(h0(), vec({1.0, -1.0}));
  CHECK(b.at(0, 1) == 1.0);
  CHECK(b.diag[0] == 0.0);
  CHECK(b.diag[1] == 0.0);
}

TEST_CASE("quadratic identity via interactions") {
  CHECK(verify_quadratic_identity(h1(), vec({1.0, -1.0, 0.0})) <= 1e-12);
  CHECK(verify_quadratic_identity(h2(), vec({7.0, 7.0, 7.0})) == 0.0);

  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Hypergraph h = random_hypergraph(rng);
    const DensityVector f = random_vector(rng, h.vertex_count(), trial % 3 == 0);
    const Real q = quadratic_form(h, f);
    CHECK(verify_quadratic_identity(h, f) <= 1e-9 * std::max<Real>(1.0, q));

    // row sums hold and the identity is split-independent
    const InteractionMatrix canonical = interaction_matrix(h, f);
    for (Index u = 0; u < h.vertex_count(); ++u)
      CHECK(std::abs(canonical.row_sum(u) - h.vertex_weight(u)) <=
            1e-12 * std::max<Real>(1.0, h.vertex_weight(u)));
    for (const auto& [uv, mass] : canonical.offdiag) {
      (void)uv;
      CHECK(mass >= 0.0);
    }

    const InteractionMatrix random_split = interaction_matrix_random(h, f, rng);
    for (Index u = 0; u < h.vertex_count(); ++u)
      CHECK(std::abs(random_split.row_sum(u) - h.vertex_weight(u)) <=
            1e-12 * std::max<Real>(1.0, h.vertex_weight(u)));
    CHECK(std::abs(interaction_quadratic(h, random_split, f) - q) <=
          1e-9 * std::max<Real>(1.0, q));
  }
}

TEST_CASE("quadratic form properties") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Hypergraph h = random_hypergraph(rng);
    const DensityVector f = random_vector(rng, h.vertex_count(), trial % 4 == 0);
    const Real q = quadratic_form(h, f);
    const Real q0 = quadratic_form_q0(h, f);

    CHECK(q >= 0.0);
    CHECK(q <= q0 + 1e-12 * std::max<Real>(1.0, q0));
    CHECK(q0 <= 2.0 * q + 1e-12 * std::max<Real>(1.0, q0));

    const Real c = rng.uniform(-3.0, 3.0);
    const Real shifted = quadratic_form(h, (f.array() + c).matrix());
    CHECK(std::abs(shifted - q) <= 1e-9 * std::max<Real>(1.0, q));

    const Real b = rng.uniform(-2.0, 2.0);
    const Real scaled = quadratic_form(h, (b * f).eval());
    CHECK(std::abs(scaled - b * b * q) <= 1e-12 * std::max<Real>(1.0, std::abs(b * b * q)));
  }
}

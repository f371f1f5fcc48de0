#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oscmono/errors.hpp"
#include "oscmono/reduction.hpp"
#include "oscmono/separation.hpp"
#include "oscmono/spectrum.hpp"

using namespace oscmono;

namespace {

const OscillatorParams unit{1.0, 1.0, 1.0};

double casimir_on(double w, double E, double lz, double R, double X, double Y) {
  const double hr = E - w * R;
  return 4.0 * w * w * hr * hr * (R * R - lz * lz) - w * w * (X * X + Y * Y);
}

}  // namespace

TEST_CASE("casimir form agrees with the phase-space evaluation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  const OscillatorParams p{1.3, 0.8, 1.0};
  for (int i = 0; i < 100; ++i) {
    PhasePoint pt{{U(rng), U(rng), U(rng)}, {U(rng), U(rng), U(rng)}};
    const auto iv = eval_integrals(pt, p);
    const auto& r = iv.reduced;
    const double c = casimir_on(p.omega, iv.motion.E, iv.motion.lz, r.R, r.X, r.Y);
    const double scale = std::pow(iv.motion.E, 4) + 1.0;
    CHECK(std::abs(c) < 1e-10 * scale);
    CHECK(iv.motion.g == doctest::Approx(iv.g_reduced_form).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("reduced slice") {
  SUBCASE("boundary through the origin at lz = 0") {
    const auto sl = reduced_slice(unit, 3.0, 0.0, 200);
    REQUIRE_FALSE(sl.upper.empty());
    CHECK(sl.upper.front().first == 0.0);
    CHECK(sl.upper.front().second == 0.0);
    bool origin = false;
    for (double R : sl.singular_R) origin |= (R == 0.0);
    CHECK(origin);
  }
  SUBCASE("g = 0 contour pinches above threshold") {
    const auto sl = reduced_slice(unit, 3.0, 0.0, 200, {0.0});
    REQUIRE(sl.contours.size() == 1);
    CHECK(sl.contours[0].hits_origin_singularity);
    const auto below = reduced_slice(OscillatorParams{3.0, 1.0, 1.0}, 3.0, 0.0, 200, {0.0});
    // below E_c the origin is the maximum of G, so g = 0 still touches it, but only there
    REQUIRE(below.contours.size() == 1);
    CHECK(below.contours[0].hits_origin_singularity);
    CHECK(below.contours[0].points.size() == 1);
    CHECK(sl.contours[0].points.size() >= 2);
  }
  SUBCASE("endpoint at R = E/omega has X = 0") {
    for (double lz : {0.0, 0.5, 1.7}) {
      const OscillatorParams p{1.2, 0.9, 1.0};
      const double E = 2.0;
      const auto sl = reduced_slice(p, E, lz, 100);
      CHECK(sl.upper.back().first == doctest::Approx(E / p.omega));
      CHECK(sl.upper.back().second == 0.0);
      CHECK(sl.lower.back().second == 0.0);
      CHECK(boundary_X(p, E, lz, E / p.omega) == 0.0);
    }
  }
  SUBCASE("boundary points satisfy the casimir") {
    const OscillatorParams p{1.4, 1.1, 1.0};
    for (double lz : {0.0, 0.3, -1.0}) {
      const double E = 3.0;
      const auto sl = reduced_slice(p, E, lz, 300);
      for (const auto* side : {&sl.upper, &sl.lower}) {
        for (auto [R, X] : *side) {
          const double scale = std::pow(E, 4);
          CHECK(std::abs(casimir_on(p.omega, E, lz, R, X, 0.0)) <= 1e-10 * scale);
          CHECK(R >= std::abs(lz) - 1e-15);
          CHECK(R <= E / p.omega + 1e-15);
        }
      }
    }
  }
  SUBCASE("contour intersections lie on both curves") {
    const OscillatorParams p{1.0, 1.0, 1.0};
    const double E = 4.0, lz = 0.5;
    const auto gr = g_range(p, E, lz);
    std::vector<double> gs;
    for (int i = 1; i < 8; ++i) gs.push_back(gr.g_min + (gr.g_max - gr.g_min) * i / 8.0);
    const auto sl = reduced_slice(p, E, lz, 200, gs);
    REQUIRE(sl.contours.size() == gs.size());
    for (const auto& c : sl.contours) {
      CHECK(c.points.size() >= 1);
      CHECK(c.points.size() <= 2);
      for (auto [R, X] : c.points) {
        CHECK(X == doctest::Approx(contour_X(p, E, lz, c.g, R)).scale(E * E));
        CHECK(std::abs(casimir_on(p.omega, E, lz, R, X, 0.0)) <= 1e-8 * std::pow(E, 4));
      }
    }
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(reduced_slice(unit, 1.0, 1.5, 10), DomainError);
    CHECK_THROWS_AS(g_range(unit, 1.0, -1.5), DomainError);
  }
}

TEST_CASE("g range") {
  SUBCASE("lz = 0 extremes") {
    const auto gr = g_range(unit, 4.0, 0.0);
    CHECK(gr.g_min == doctest::Approx(-8.0));
    CHECK(gr.g_max == doctest::Approx(49.0 / 4.0).epsilon(1e-10));
  }
  SUBCASE("lz = 1 minimum") { CHECK(g_range(unit, 4.0, 1.0).g_min == doctest::Approx(-7.0)); }
  SUBCASE("circular orbit collapses the range") {
    const OscillatorParams p{1.3, 0.7, 1.0};
    const double E = 2.1, lz = E / p.omega;
    const auto gr = g_range(p, E, lz);
    const double expect = lz * lz - 2.0 * p.a * p.a * E;
    CHECK(gr.g_min == doctest::Approx(expect));
    CHECK(gr.g_max == doctest::Approx(expect));
  }
  SUBCASE("maximum matches the double-root branch") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 60; ++i) {
      const OscillatorParams p{0.3 + 2.0 * U(rng), 0.5 + U(rng), 1.0};
      const double E = 0.2 + 5.0 * U(rng);
      const double lz = (0.02 + 0.96 * U(rng)) * E / p.omega;
      const auto gr = g_range(p, E, lz);
      const double branch = upper_branch_g(p, E, lz);
      CHECK(std::abs(gr.g_max - branch) <= 1e-8 * std::max(1.0, std::abs(branch)));
      CHECK(gr.g_min <= gr.g_max);
    }
  }
  SUBCASE("maximum dominates the sampled contour values") {
    const double E = 3.0, lz = 0.7;
    const auto gr = g_range(unit, E, lz);
    const auto sl = reduced_slice(unit, E, lz, 400);
    for (auto [R, X] : sl.upper) {
      const double g = lz * lz - 2 * R * R - 2 * (1.0 - E) * R + X;
      CHECK(g <= gr.g_max + 1e-9);
      CHECK(g >= gr.g_min - 1e-9);
    }
  }
}

TEST_CASE("hopf threshold") {
  CHECK(hopf_and_singular_fiber(unit, 1.0).E_c == doctest::Approx(0.5));
  CHECK(hopf_and_singular_fiber(OscillatorParams{1.5, 1.0, 1.0}, 21.5).pinched);
  CHECK_FALSE(hopf_and_singular_fiber(OscillatorParams{10.0, 1.0, 1.0}, 21.5).pinched);
  const auto v = hopf_and_singular_fiber(OscillatorParams{2.0, 0.5, 1.0}, 0.4);
  CHECK(v.E_c == doctest::Approx(0.5));
  CHECK_FALSE(v.pinched);
}

TEST_CASE("symplectic volume and counts") {
  SUBCASE("n = 10, m = 0") {
    const auto v = symplectic_volume(unit, 11.5, 0.0);
    CHECK(v.volume == doctest::Approx(M_PI * 11.5));
    CHECK(v.weyl_count == doctest::Approx(5.75));
    REQUIRE(v.exact_count.has_value());
    CHECK(*v.exact_count == 6);
  }
  SUBCASE("n = 11, m = 0") {
    const auto v = symplectic_volume(unit, 12.5, 0.0);
    REQUIRE(v.exact_count.has_value());
    CHECK(*v.exact_count == 6);
  }
  SUBCASE("corner of the triangle") {
    const OscillatorParams p{1.0, 2.0, 1.0};
    const auto v = symplectic_volume(p, 3.0, 1.5);
    CHECK(v.volume == 0.0);
  }
  SUBCASE("off-grid input has no exact count") {
    CHECK_FALSE(symplectic_volume(unit, 11.4, 0.0).exact_count.has_value());
    CHECK_FALSE(symplectic_volume(unit, 11.5, 0.5).exact_count.has_value());
  }
  SUBCASE("domain error below the corner") {
    CHECK_THROWS_AS(symplectic_volume(unit, 1.0, 2.0), DomainError);
  }
  SUBCASE("hbar scaling") {
    const OscillatorParams p{1.0, 1.0, 0.5};
    const auto v = symplectic_volume(p, 0.5 * (10 + 1.5), 0.5 * 2);
    REQUIRE(v.exact_count.has_value());
    CHECK(*v.exact_count == exact_state_count(10, 2));
  }
  SUBCASE("total states") {
    CHECK(total_states(20) == 231);
    CHECK(total_states(0) == 1);
    CHECK(total_states(2) == 6);
    CHECK_THROWS_AS(total_states(-1), InputError);
    long dims = 0;
    for (int m = -2; m <= 2; ++m) dims += static_cast<long>(subspace_basis(2, m).states.size());
    CHECK(dims == 6);
  }
  SUBCASE("sums and weyl interpolation") {
    for (long n = 0; n <= 30; ++n) {
      long sum = 0;
      for (long m = -n; m <= n; ++m) {
        const long c = exact_state_count(n, m);
        sum += c;
        CHECK(c == static_cast<long>(subspace_basis(static_cast<int>(n), static_cast<int>(m)).states.size()));
        const auto v = symplectic_volume(unit, n + 1.5, static_cast<double>(m));
        REQUIRE(v.exact_count.has_value());
        CHECK(*v.exact_count == c);
        CHECK(std::abs(v.weyl_count - c) <= 0.5);
      }
      CHECK(sum == total_states(n));
    }
  }
}

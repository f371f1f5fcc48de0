#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "oscmono/errors.hpp"
#include "oscmono/reduction.hpp"
#include "oscmono/semiclassics.hpp"
#include "oscmono/separation.hpp"
#include "oscmono/spectrum.hpp"

using namespace oscmono;

namespace {

const OscillatorParams unit{1.0, 1.0, 1.0};

struct Sample {
  OscillatorParams p;
  MotionValues v;
};

// random admissible (E, lz, g) drawn away from the critical set
std::vector<Sample> admissible_samples(int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Sample> out;
  while (static_cast<int>(out.size()) < count) {
    const OscillatorParams p{0.3 + 2.0 * U(rng), 0.5 + U(rng), 1.0};
    const double E = 0.3 + 6.0 * U(rng);
    const double lz = (2.0 * U(rng) - 1.0) * 0.95 * E / p.omega;
    if (std::abs(lz) < 1e-3) continue;
    const auto gr = g_range(p, E, lz);
    const double g = gr.g_min + (0.02 + 0.96 * U(rng)) * (gr.g_max - gr.g_min);
    const MotionValues v{E, lz, g};
    if (!classify(p, v).admissible) continue;
    out.push_back({p, v});
  }
  return out;
}

}  // namespace

TEST_CASE("action integrals") {
  SUBCASE("circular orbit has no radial action") {
    const double E = 2.0, lz = E;
    const auto gr = g_range(unit, E, lz);
    const auto t = action_integrals(unit, {E, lz, gr.g_min});
    CHECK(t.I_xi == doctest::Approx(0.0).scale(1.0));
    CHECK(t.I_eta == doctest::Approx(0.0).scale(1.0));
    CHECK(t.I_phi == lz);
  }
  SUBCASE("energy identity at E = 5, lz = 1, g = 0") {
    const double tol = 1e-10;
    const auto t = action_integrals(unit, {5.0, 1.0, 0.0}, tol);
    CHECK(t.I_xi > 0.0);
    CHECK(t.I_eta > 0.0);
    CHECK(std::abs(energy_action_sum(t) - 5.0) < 10 * tol * 5.0);
    CHECK(energy_action_sum(t) == doctest::Approx(t.I_eta + 2 * t.I_xi + 1.0));
    // with this normalization the unweighted sum misses by exactly I_xi
    CHECK(printed_action_sum(t) == doctest::Approx(5.0 - t.I_xi));
    CHECK(std::abs(printed_action_sum(t) - 5.0) > 0.1);
  }
  SUBCASE("identity over random admissible values") {
    const double tol = 1e-10;
    for (const auto& s : admissible_samples(100, 11)) {
      const auto t = action_integrals(s.p, s.v, tol);
      const double Ew = s.v.E / s.p.omega;
      CHECK(std::abs(energy_action_sum(t) - Ew) < 10 * tol * Ew);
      CHECK(t.I_phi == s.v.lz);
      CHECK(t.I_xi >= 0.0);
      CHECK(t.I_eta >= 0.0);
      CHECK(t.eta_interval.first >= -1.0);
      CHECK(t.eta_interval.second <= 1.0);
      CHECK(t.xi_interval.first >= 1.0);
    }
  }
  SUBCASE("monotone in g") {
    for (auto [a, E, lz] : {std::tuple{1.0, 5.0, 1.0}, std::tuple{1.5, 10.0, -2.0},
                            std::tuple{3.0, 2.0, 0.5}}) {
      const OscillatorParams p{a, 1.0, 1.0};
      const auto gr = g_range(p, E, lz);
      double prev_eta = -1.0, prev_xi = 1e300;
      for (int i = 1; i < 40; ++i) {
        const double g = gr.g_min + (gr.g_max - gr.g_min) * i / 40.0;
        const auto t = action_integrals(p, {E, lz, g});
        CHECK(t.I_eta > prev_eta);
        CHECK(t.I_xi < prev_xi);
        prev_eta = t.I_eta;
        prev_xi = t.I_xi;
      }
    }
  }
  SUBCASE("tolerance refinement stays inside the estimate") {
    for (const auto& s : admissible_samples(30, 5)) {
      const auto c = action_integrals(s.p, s.v, 1e-8);
      const auto f = action_integrals(s.p, s.v, 5e-9);
      CHECK(std::abs(c.I_eta - f.I_eta) <= c.error_estimate);
      CHECK(std::abs(c.I_xi - f.I_xi) <= c.error_estimate);
    }
  }
  SUBCASE("inadmissible input") {
    CHECK_THROWS_AS(action_integrals(unit, {5.0, 0.0, 100.0}), DomainError);
    CHECK_THROWS_AS(action_integrals(unit, {1.0, 2.0, 0.0}), DomainError);
  }
}

TEST_CASE("slopes at lz = 0") {
  SUBCASE("jump above threshold") {
    const double E = 5.0;
    const double g = 0.5 * g_range(unit, E, 0.0).g_max;
    const auto s = eta_slopes_at_zero(unit, E, g);
    CHECK(s.mismatch);
    CHECK(std::abs(s.plus - s.minus) > 10 * s.error);
  }
  SUBCASE("smooth below threshold") {
    const OscillatorParams p{2.0, 1.0, 1.0};  // E_c = 2
    const double E = 1.0;
    const auto gr = g_range(p, E, 0.0);
    const auto s = eta_slopes_at_zero(p, E, 0.5 * (gr.g_min + gr.g_max));
    CHECK_FALSE(s.mismatch);
  }
}

TEST_CASE("EBK quantization") {
  SUBCASE("ground state") {
    const auto pt = ebk_point(unit, 0, 0, 0);
    // the xi cycle enters twice, so the lowest torus sits at the exact 3/2
    CHECK(pt.E == doctest::Approx(1.5));
    const auto gr = g_range(unit, pt.E, 0.0);
    CHECK(pt.g >= gr.g_min);
    CHECK(pt.g <= gr.g_max);
  }
  SUBCASE("states lie in the admissible band and are m-symmetric") {
    const OscillatorParams p{1.5, 1.0, 1.0};
    for (int m = 1; m <= 4; ++m) {
      for (int ne = 0; ne <= 3; ++ne) {
        for (int nx = 0; nx <= 2; ++nx) {
          const auto a = ebk_point(p, m, ne, nx);
          const auto b = ebk_point(p, -m, ne, nx);
          CHECK(a.g == doctest::Approx(b.g).epsilon(1e-12));
          CHECK(a.E == doctest::Approx(b.E));
          const auto gr = g_range(p, a.E, a.lz);
          CHECK(a.g >= gr.g_min);
          CHECK(a.g <= gr.g_max);
          CHECK(std::abs(a.xi_residual) < 1e-8);
        }
      }
    }
  }
  SUBCASE("counts per m at n = 2") {
    const auto sc = ebk_spectrum(unit, 2);
    std::map<int, long> counts;
    for (const auto& pt : sc.points) ++counts[pt.m];
    long total = 0;
    for (int m = -2; m <= 2; ++m) {
      CHECK(counts[m] == exact_state_count(2, m));
      total += counts[m];
    }
    CHECK(total == total_states(2));
    CHECK(sc.energy_offset == doctest::Approx(0.0).scale(1.0));
  }
  SUBCASE("langer shift") {
    EbkOptions o;
    o.langer = true;
    const auto sc = ebk_spectrum(unit, 4, o);
    CHECK(sc.energy_offset == doctest::Approx(0.5));
    for (const auto& pt : sc.points) CHECK(pt.lz_eff == doctest::Approx(std::abs(pt.m) + 0.5));
  }
  SUBCASE("agreement with the exact spectrum at n = 20, a = 3/2") {
    const OscillatorParams p{1.5, 1.0, 1.0};
    const auto sc = ebk_spectrum(p, 20);
    const auto js = joint_spectrum(p, 20);
    CHECK(sc.points.size() == js.size());
    const auto cmp = compare_ebk(sc, js);
    CHECK(cmp.fraction_within >= 0.9);
    for (const auto& pt : sc.points) {
      bool mirrored = false;
      for (const auto& q : sc.points) mirrored |= (q.m == -pt.m && q.n_eta == pt.n_eta && q.g == pt.g);
      CHECK(mirrored);
    }
  }
  SUBCASE("negative quantum numbers") {
    CHECK_THROWS(ebk_point(unit, 0, -1, 0));
    CHECK_THROWS(ebk_spectrum(unit, -1));
  }
}

#include "oscmono/reduction.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>

#include "oscmono/separation.hpp"

namespace oscmono {

namespace {

double sq(double x) { return x * x; }

void check_lz(const OscillatorParams& prm, double E, double lz) {
  if (std::abs(lz) > (E / prm.omega) * (1.0 + 1e-12) || E < 0.0)
    throw DomainError("|lz| exceeds E/omega");
}

}  // namespace

double contour_X(const OscillatorParams& prm, double E, double lz, double g, double R) {
  const double w = prm.omega;
  return w * (g - lz * lz) + 2.0 * w * R * R + 2.0 * (sq(prm.a * w) - E) * R;
}

double boundary_X(const OscillatorParams& prm, double E, double lz, double R) {
  return 2.0 * (E - prm.omega * R) * std::sqrt(std::max(0.0, R * R - lz * lz));
}

ReducedSlice reduced_slice(const OscillatorParams& prm, double E, double lz, int resolution,
                           const std::vector<double>& contour_g) {
  check_lz(prm, E, lz);
  if (resolution < 2) throw InputError("resolution must be at least 2");
  const double w = prm.omega;
  const double lo = std::abs(lz), hi = E / w;
  ReducedSlice sl;
  sl.E = E;
  sl.lz = lz;
  for (int i = 0; i < resolution; ++i) {
    const double R = lo + (hi - lo) * i / (resolution - 1);
    const double X = boundary_X(prm, E, lz, R);
    sl.upper.push_back({R, X});
    sl.lower.push_back({R, X == 0.0 ? 0.0 : -X});
  }
  sl.singular_R.push_back(hi);
  if (lo == 0.0) sl.singular_R.insert(sl.singular_R.begin(), 0.0);

  // Squaring the boundary relation and inserting the contour line makes the
  // R^4 terms cancel; what is left is a cubic in R.
  const double scale = std::max(1.0, E);
  for (double g : contour_g) {
    ContourIntersection ci;
    ci.g = g;
    const double al = w * (g - lz * lz), be = 2.0 * (sq(prm.a * w) - E), ga = 2.0 * w;
    const double c3 = 2.0 * be * ga + 8.0 * E * w;
    const double c2 = be * be + 2.0 * al * ga - 4.0 * E * E + 4.0 * w * w * lz * lz;
    const double c1 = 2.0 * al * be - 8.0 * E * w * lz * lz;
    const double c0 = al * al + 4.0 * E * E * lz * lz;
    std::vector<double> Rs;
    for (auto z : cubic_roots(c0, c1, c2, c3)) {
      if (z.imag() != 0.0) continue;
      double R = z.real();
      if (R < lo - 1e-10 * scale || R > hi + 1e-10 * scale) continue;
      R = std::clamp(R, lo, hi);
      const bool dup = std::any_of(Rs.begin(), Rs.end(),
                                   [&](double r) { return std::abs(r - R) <= 1e-10 * scale; });
      if (!dup) Rs.push_back(R);
    }
    if (lo == 0.0) ci.hits_origin_singularity = std::abs(contour_X(prm, E, lz, g, 0.0)) <= 1e-10 * scale;
    // a double root at R = 0 can come back as a tiny complex pair
    if (ci.hits_origin_singularity && (Rs.empty() || *std::min_element(Rs.begin(), Rs.end()) > 1e-10 * scale))
      Rs.push_back(0.0);
    std::sort(Rs.begin(), Rs.end());
    for (double R : Rs) ci.points.push_back({R, contour_X(prm, E, lz, g, R)});
    ci.hits_corner_singularity = std::abs(contour_X(prm, E, lz, g, hi)) <= 1e-10 * scale * scale;
    sl.contours.push_back(std::move(ci));
  }
  return sl;
}

GRange g_range(const OscillatorParams& prm, double E, double lz) {
  check_lz(prm, E, lz);
  const double w = prm.omega, a2w2 = sq(prm.a * w), l2 = lz * lz;
  GRange gr;
  gr.g_min = l2 - 2.0 * prm.a * prm.a * E;
  const double lo = std::abs(lz), hi = E / w;
  if (hi - lo <= 1e-14 * std::max(1.0, hi)) {
    gr.g_max = gr.g_min;
    gr.R_at_max = hi;
    return gr;
  }

  // G along the upper boundary of the slice Y = 0
  auto g_of = [&](double R) {
    const double S = std::sqrt(std::max(0.0, R * R - l2));
    return l2 - 2.0 * R * R - (2.0 / w) * (a2w2 - E) * R + (2.0 / w) * (E - w * R) * S;
  };
  const auto best = boost::math::tools::brent_find_minima(
      [&](double R) { return -g_of(R); }, lo, hi, 40);
  double R = best.first;

  // Newton on g'(R) = 0 where the maximum is interior
  if (l2 > 0.0 || R > lo + 1e-9 * hi) {
    for (int it = 0; it < 20; ++it) {
      const double S = std::sqrt(std::max(R * R - l2, 1e-300));
      const double S1 = R / S, S2 = -l2 / (S * S * S);
      const double d1 = -4.0 * R - (2.0 / w) * (a2w2 - E) + (2.0 / w) * (-w * S + (E - w * R) * S1);
      const double d2 = -4.0 + (2.0 / w) * (-2.0 * w * S1 + (E - w * R) * S2);
      if (!(d2 < 0.0)) break;
      const double nR = R - d1 / d2;
      if (!(nR > lo && nR < hi)) break;
      const bool done = std::abs(nR - R) <= 1e-15 * hi;
      R = nR;
      if (done) break;
    }
  }
  const double at_lo = g_of(lo);
  gr.R_at_max = R;
  gr.g_max = g_of(R);
  if (at_lo > gr.g_max) {
    gr.g_max = at_lo;
    gr.R_at_max = lo;
  }
  return gr;
}

HopfVerdict hopf_and_singular_fiber(const OscillatorParams& prm, double E) {
  if (!(E > 0.0)) throw InputError("energy must be positive");
  HopfVerdict h;
  h.E_c = prm.critical_energy();
  h.pinched = E > h.E_c;
  return h;
}

long exact_state_count(long n, long m) {
  const long am = std::labs(m);
  if (n < 0 || am > n) return 0;
  return (n - am) % 2 == 0 ? (n + 2 - am) / 2 : (n + 1 - am) / 2;
}

long total_states(long n) {
  if (n < 0) throw InputError("n must be nonnegative");
  return (n + 1) * (n + 2) / 2;
}

VolumeReport symplectic_volume(const OscillatorParams& prm, double E, double lz) {
  const double w = prm.omega, hb = prm.hbar;
  if (E < w * std::abs(lz) * (1.0 - 1e-15)) throw DomainError("E below omega |lz|");
  VolumeReport v;
  v.volume = std::max(0.0, (M_PI / w) * (E - w * std::abs(lz)));
  v.weyl_count = v.volume / (2.0 * M_PI * hb);
  // only on the quantum grid: E = hbar w (n + 3/2), lz = hbar m
  const double nf = E / (hb * w) - 1.5, mf = lz / hb;
  const double nr = std::round(nf), mr = std::round(mf);
  if (std::abs(nf - nr) <= 1e-9 * std::max(1.0, std::abs(nf)) &&
      std::abs(mf - mr) <= 1e-9 * std::max(1.0, std::abs(mf)) && nr >= 0 &&
      std::abs(mr) <= nr)
    v.exact_count = exact_state_count(static_cast<long>(nr), static_cast<long>(mr));
  return v;
}

}  // namespace oscmono

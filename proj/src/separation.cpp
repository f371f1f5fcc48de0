#include "oscmono/separation.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace oscmono {

namespace {

constexpr double kRealTol = 1e-10;
constexpr double kCoincideTol = 1e-8;

double sq(double x) { return x * x; }

bool is_planar(const MotionValues& v, const OscillatorParams& prm) {
  return std::abs(v.lz) <= 1e-12 * std::max(1.0, v.E / prm.omega);
}

std::complex<double> horner(const std::array<double, 4>& c, std::complex<double> x) {
  return c[0] + x * (c[1] + x * (c[2] + x * c[3]));
}

std::complex<double> dhorner(const std::array<double, 4>& c, std::complex<double> x) {
  return c[1] + x * (2.0 * c[2] + x * 3.0 * c[3]);
}

void sort_roots(std::array<std::complex<double>, 3>& r) {
  for (auto& z : r)
    if (std::abs(z.imag()) < kRealTol * (1.0 + std::abs(z))) z = {z.real(), 0.0};
  std::sort(r.begin(), r.end(), [](auto x, auto y) {
    const bool rx = x.imag() == 0.0, ry = y.imag() == 0.0;
    if (rx != ry) return rx;
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
}

}  // namespace

double SeparationPolynomial::scale() const {
  double m = 0.0;
  for (double x : c) m = std::max(m, std::abs(x));
  return m;
}

SeparationPolynomial separation_polynomial(const OscillatorParams& prm, const MotionValues& v) {
  const double a2 = prm.a * prm.a, w2 = prm.omega * prm.omega;
  SeparationPolynomial P;
  P.params = prm;
  P.vals = v;
  P.c[0] = 2.0 * a2 * v.E + v.g - v.lz * v.lz;
  P.c[1] = -4.0 * a2 * v.E - a2 * a2 * w2 - v.g;
  P.c[2] = 2.0 * a2 * v.E + 2.0 * a2 * a2 * w2;
  P.c[3] = -a2 * a2 * w2;
  return P;
}

std::array<std::complex<double>, 3> cubic_roots(double c0, double c1, double c2, double c3) {
  if (c3 == 0.0) throw InputError("cubic_roots: leading coefficient is zero");
  const double b = c2 / c3, c = c1 / c3, d = c0 / c3;
  // depressed: t^3 + p t + q with x = t - b/3
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double disc = sq(q / 2.0) + p * p * p / 27.0;
  std::array<std::complex<double>, 3> r;
  if (disc < 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double th = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) r[k] = m * std::cos(th - 2.0 * M_PI * k / 3.0) - b / 3.0;
  } else {
    const double sd = std::sqrt(disc);
    // pick the sign avoiding cancellation
    const double A = -std::cbrt(q / 2.0 + std::copysign(sd, q));
    const double B = (A != 0.0) ? -p / (3.0 * A) : 0.0;
    const double re = -0.5 * (A + B), im = 0.5 * std::sqrt(3.0) * (A - B);
    r[0] = A + B - b / 3.0;
    r[1] = {re - b / 3.0, im};
    r[2] = {re - b / 3.0, -im};
  }
  const std::array<double, 4> cf = {c0, c1, c2, c3};
  for (auto& z : r) {
    for (int it = 0; it < 3; ++it) {
      const auto f = horner(cf, z), df = dhorner(cf, z);
      if (std::abs(df) == 0.0) break;
      const auto nz = z - f / df;
      if (std::abs(horner(cf, nz)) >= std::abs(f)) break;
      z = nz;
    }
  }
  sort_roots(r);
  return r;
}

int RootSet::real_count() const {
  int n = 0;
  for (auto z : u_roots) n += z.imag() == 0.0;
  return n;
}

std::vector<double> RootSet::real_u() const {
  std::vector<double> out;
  for (auto z : u_roots)
    if (z.imag() == 0.0) out.push_back(z.real());
  std::sort(out.begin(), out.end());
  return out;
}

RootSet polynomial_roots(const SeparationPolynomial& poly) {
  RootSet rs;
  const auto& prm = poly.params;
  const auto& v = poly.vals;
  if (is_planar(v, prm)) {
    // s = +-1 always; the other pair from the quadratic in u
    const double a2w2 = sq(prm.a * prm.omega);
    const double D = sq(a2w2 - 2.0 * v.E) - 4.0 * sq(prm.omega) * v.g;
    const double mid = (2.0 * v.E + a2w2) / (2.0 * a2w2);
    rs.u_roots[0] = 1.0;
    if (D >= 0.0) {
      const double h = std::sqrt(D) / (2.0 * a2w2);
      rs.u_roots[1] = mid - h;
      rs.u_roots[2] = mid + h;
    } else {
      const double h = std::sqrt(-D) / (2.0 * a2w2);
      rs.u_roots[1] = {mid, h};
      rs.u_roots[2] = {mid, -h};
    }
    sort_roots(rs.u_roots);
  } else {
    rs.u_roots = cubic_roots(poly.c[0], poly.c[1], poly.c[2], poly.c[3]);
  }

  const auto ru = rs.real_u();
  if (ru.size() == 1) {
    rs.disposition = Disposition::OneReal;
  } else {
    auto same = [](double x, double y) {
      return std::abs(x - y) <= kCoincideTol * (1.0 + std::abs(x) + std::abs(y));
    };
    const bool s01 = same(ru[0], ru[1]), s12 = same(ru[1], ru[2]);
    rs.disposition = (s01 && s12)   ? Disposition::ThreeRealTriple
                     : (s01 || s12) ? Disposition::ThreeRealDouble
                                    : Disposition::ThreeRealDistinct;
  }

  // clusters of coincident u, then signed s roots
  std::vector<std::pair<double, int>> cl;
  for (double u : ru) {
    if (!cl.empty() && std::abs(u - cl.back().first) <= kCoincideTol * (1.0 + std::abs(u)))
      ++cl.back().second;
    else
      cl.push_back({u, 1});
  }
  for (auto [u, mult] : cl) {
    if (std::abs(u) <= kCoincideTol) {
      rs.s_roots.push_back({0.0, 2 * mult});
    } else if (u > 0.0) {
      const double s = std::sqrt(u);
      rs.s_roots.push_back({-s, mult});
      rs.s_roots.push_back({s, mult});
    }
  }
  std::sort(rs.s_roots.begin(), rs.s_roots.end(),
            [](const SRoot& x, const SRoot& y) { return x.s < y.s; });
  return rs;
}

double discriminant(const OscillatorParams& prm, const MotionValues& v) {
  const double a = prm.a, w = prm.omega;
  const double a12 = std::pow(a, 12);
  const double first = 2.0 * a * a * v.E + v.g - v.lz * v.lz;
  return 64.0 * a12 * w * w * first * sq(discriminant_upper_factor(prm, v));
}

namespace {

std::array<double, 11> upper_factor_terms(const OscillatorParams& prm, const MotionValues& v) {
  const double a = prm.a, w = prm.omega, E = v.E, g = v.g, l2 = v.lz * v.lz;
  const double a2 = a * a, a4 = a2 * a2, a6 = a4 * a2, a8 = a4 * a4;
  const double w2 = w * w, w4 = w2 * w2, w6 = w4 * w2;
  return {4.0 * a8 * l2 * w6,       -24.0 * a6 * E * l2 * w4, -a4 * g * g * w4,
          -18.0 * a4 * g * l2 * w4, 27.0 * a4 * l2 * l2 * w4, 48.0 * a4 * E * E * l2 * w2,
          4.0 * a2 * g * g * E * w2, 36.0 * a2 * g * E * l2 * w2, -32.0 * a2 * E * E * E * l2,
          4.0 * g * g * g * w2,     -4.0 * g * g * E * E};
}

}  // namespace

double discriminant_upper_factor(const OscillatorParams& prm, const MotionValues& v) {
  double s = 0.0;
  for (double t : upper_factor_terms(prm, v)) s += t;
  return s;
}

double discriminant_upper_factor_scale(const OscillatorParams& prm, const MotionValues& v) {
  double s = 0.0;
  for (double t : upper_factor_terms(prm, v)) s += std::abs(t);
  return s;
}

double discriminant_resultant(const SeparationPolynomial& poly) {
  // P(s) degree 6, P'(s) degree 5; Sylvester matrix is 11 x 11
  const auto& c = poly.c;
  const std::array<double, 7> p = {c[3], 0.0, c[2], 0.0, c[1], 0.0, c[0]};
  const std::array<double, 6> dp = {6.0 * c[3], 0.0, 4.0 * c[2], 0.0, 2.0 * c[1], 0.0};
  Eigen::Matrix<double, 11, 11> S = Eigen::Matrix<double, 11, 11>::Zero();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 7; ++j) S(i, i + j) = p[j];
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) S(5 + i, i + j) = dp[j];
  const double res = S.fullPivLu().determinant();
  return -res / c[3];
}

CriticalLoci critical_loci(const OscillatorParams& prm, double E) {
  if (!(E > 0.0)) throw InputError("energy must be positive");
  CriticalLoci L;
  const double a2 = prm.a * prm.a, w2 = prm.omega * prm.omega;
  L.E = E;
  L.L1 = -2.0 * a2 * E;
  L.L2 = 0.0;
  L.L3 = sq(a2 * w2 - 2.0 * E) / (4.0 * w2);
  L.E_c = prm.critical_energy();
  L.isolated_point = E > L.E_c;
  L.kink = E < L.E_c;
  return L;
}

double lower_branch_g(const OscillatorParams& prm, double E, double lz) {
  return lz * lz - 2.0 * prm.a * prm.a * E;
}

std::pair<double, double> upper_branch_point(const OscillatorParams& prm, double E, double d) {
  const double a2 = prm.a * prm.a, w2 = prm.omega * prm.omega, d2 = d * d;
  const double g = -a2 * (d2 - 1.0) * (a2 * w2 * (3.0 * d2 - 1.0) - 4.0 * E);
  const double l2 = a2 * sq(d2 - 1.0) * (a2 * w2 * (2.0 * d2 - 1.0) - 2.0 * E);
  return {l2, g};
}

double upper_branch_d_start(const OscillatorParams& prm, double E) {
  const double a2w2 = sq(prm.a * prm.omega);
  if (E > prm.critical_energy()) return std::sqrt((2.0 * E + a2w2) / (2.0 * a2w2));
  return 1.0;
}

double upper_branch_d_for_lz(const OscillatorParams& prm, double E, double lz) {
  const double target = lz * lz;
  const double lmax = E / prm.omega;
  if (std::abs(lz) > lmax * (1.0 + 1e-12)) throw DomainError("|lz| exceeds E/omega");
  const double d0 = upper_branch_d_start(prm, E);
  if (target == 0.0) return d0;
  auto f = [&](double d) { return upper_branch_point(prm, E, d).first - target; };
  double hi = d0 + 1.0;
  while (f(hi) < 0.0) hi = d0 + 2.0 * (hi - d0);
  boost::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(52);
  const auto r = boost::math::tools::toms748_solve(f, d0, hi, f(d0), f(hi), tol, iters);
  return 0.5 * (r.first + r.second);
}

double upper_branch_g(const OscillatorParams& prm, double E, double lz) {
  return upper_branch_point(prm, E, upper_branch_d_for_lz(prm, E, lz)).second;
}

std::string region_name(Region r) {
  switch (r) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
    case Region::IV: return "IV";
    case Region::V: return "V";
    case Region::BoundaryL1: return "boundary-L1";
    case Region::BoundaryL2: return "boundary-L2";
    case Region::BoundaryL3: return "boundary-L3";
    case Region::SpatialRegular: return "spatial-regular";
    case Region::SpatialCritical: return "spatial-critical";
    case Region::Nonphysical: return "nonphysical";
  }
  return "nonphysical";
}

namespace {

// P > 0 somewhere in (-1,1) and somewhere in (1, inf), decided exactly from
// the sign of P between consecutive critical points in u.
bool positive_on_both(const SeparationPolynomial& P, const RootSet& rs) {
  std::vector<double> cut = {0.0, 1.0};
  for (double u : rs.real_u())
    if (u > 0.0) cut.push_back(u);
  std::sort(cut.begin(), cut.end());
  const double big = 2.0 * cut.back() + 1.0;
  cut.push_back(big);
  const double tol = 1e-12 * P.scale();
  bool inner = false, outer = false;
  for (std::size_t i = 0; i + 1 < cut.size(); ++i) {
    const double lo = cut[i], hi = cut[i + 1];
    if (hi - lo <= 1e-14) continue;
    const double mid = 0.5 * (lo + hi);
    if (P.at_u(mid) <= tol) continue;
    if (hi <= 1.0) inner = true;
    if (lo >= 1.0) outer = true;
  }
  return inner && outer;
}

}  // namespace

Classification classify(const OscillatorParams& prm, const MotionValues& v) {
  const double a2 = prm.a * prm.a;
  const auto loci = critical_loci(prm, std::max(v.E, std::numeric_limits<double>::min()));
  const double tol = 1e-9 * std::max({1.0, std::abs(v.g), 2.0 * a2 * v.E, loci.L3});
  const auto P = separation_polynomial(prm, v);
  const auto rs = polynomial_roots(P);

  if (is_planar(v, prm)) {
    // boundaries take precedence within tolerance
    if (std::abs(v.g - loci.L1) <= tol) return {Region::BoundaryL1, true};
    if (std::abs(v.g) <= tol) {
      if (v.E < loci.E_c) return {Region::SpatialCritical, true};
      return {Region::BoundaryL2, true};
    }
    if (std::abs(v.g - loci.L3) <= tol) return {Region::BoundaryL3, v.E >= loci.E_c};
    // the pair s2, s3 beside the fixed roots s = +-1
    const double a2w2 = a2 * sq(prm.omega);
    const double D = sq(a2w2 - 2.0 * v.E) - 4.0 * sq(prm.omega) * v.g;
    if (D < 0.0) return {Region::II, false};
    const double mid = (2.0 * v.E + a2w2) / (2.0 * a2w2), h = std::sqrt(D) / (2.0 * a2w2);
    const double u2 = mid - h, u3 = mid + h;
    if (u2 < 0.0) return {Region::V, false};
    if (u2 < 1.0 && u3 > 1.0) return {Region::IV, true};
    if (u2 > 1.0) return {Region::III, true};
    return {Region::I, false};
  }

  if (std::abs(v.lz) > (v.E / prm.omega) * (1.0 + 1e-12)) return {Region::Nonphysical, false};
  const double gmin = lower_branch_g(prm, v.E, v.lz);
  const double gmax = upper_branch_g(prm, v.E, v.lz);
  if (std::abs(v.g - gmin) <= tol || std::abs(v.g - gmax) <= tol)
    return {Region::SpatialCritical, true};
  if (positive_on_both(P, rs)) return {Region::SpatialRegular, true};
  return {Region::Nonphysical, false};
}

CausticData caustic(const OscillatorParams& prm, const MotionValues& v) {
  const auto c = classify(prm, v);
  if (!c.admissible) throw DomainError("caustic: values are not admissible");
  const auto rs = polynomial_roots(separation_polynomial(prm, v));
  const auto ru = rs.real_u();
  if (ru.size() != 3) throw DomainError("caustic: expected three real roots in u");
  CausticData out;
  out.eta_turning.push_back(std::sqrt(std::max(0.0, ru[0])));
  for (int i = 1; i < 3; ++i)
    if (ru[i] > 1.0 + 1e-12) out.xi_turning.push_back(std::sqrt(ru[i]));
  switch (c.label) {
    case Region::IV: out.kind = "hyperboloid+ellipsoid"; break;
    case Region::III: out.kind = "two-ellipsoids"; break;
    case Region::SpatialRegular: out.kind = "hyperboloid+two-ellipsoids"; break;
    default: out.kind = "degenerate"; break;
  }
  return out;
}

BifurcationSlice energy_slice(const OscillatorParams& prm, double E, int resolution) {
  if (!(E > 0.0)) throw InputError("energy must be positive");
  if (resolution < 2) throw InputError("resolution must be at least 2");
  BifurcationSlice sl;
  sl.E = E;
  sl.loci = critical_loci(prm, E);
  const double lmax = E / prm.omega;
  // odd count keeps lz = 0 on the grid, where the kink lives
  const int n = resolution % 2 ? resolution : resolution + 1;
  for (int i = 0; i < n; ++i) {
    double lz = -lmax + 2.0 * lmax * i / (n - 1);
    if (i == n / 2) lz = 0.0;
    sl.lower_branch.push_back({lz, lower_branch_g(prm, E, lz)});
    sl.upper_branch.push_back({lz, upper_branch_g(prm, E, lz)});
  }
  if (sl.loci.isolated_point) sl.isolated_point = std::make_pair(0.0, 0.0);
  sl.kink_present = sl.loci.kink;
  return sl;
}

}  // namespace oscmono

#include "oscmono/semiclassics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "oscmono/parallel.hpp"
#include "oscmono/reduction.hpp"
#include "oscmono/separation.hpp"

namespace oscmono {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 21>;

double integrate(const auto& f, double lo, double hi, double tol, double& err) {
  double e = 0.0;
  const double v = GK::integrate(f, lo, hi, 20, tol, &e);
  if (!std::isfinite(v)) throw NumericalError("action quadrature produced a non-finite value");
  err += e * std::abs(v);
  return v;
}

}  // namespace

ActionTriple action_integrals(const OscillatorParams& prm, const MotionValues& v,
                              double quad_tol) {
  if (!(quad_tol > 0.0)) throw InputError("quadrature tolerance must be positive");
  if (!classify(prm, v).admissible) throw DomainError("actions: values are not admissible");
  const auto rs = polynomial_roots(separation_polynomial(prm, v));
  auto r = rs.real_u();
  if (r.size() != 3) throw DomainError("actions: separation polynomial lacks three real roots");
  // r1 bounds eta, [r2, r3] bounds xi
  const double r1 = std::clamp(r[0], 0.0, 1.0);
  const double r2 = std::max(r[1], 1.0), r3 = std::max(r[2], r2);
  const double lead = prm.a * prm.a * prm.omega;  // sqrt(a^4 w^2)

  ActionTriple t;
  t.I_phi = v.lz;
  double err = 0.0;

  // eta: s = h sin(th); sqrt(r1 - u) = h cos(th) comes out exactly
  const double h = std::sqrt(r1);
  t.eta_interval = {-h, h};
  if (h > 0.0) {
    auto f = [&](double th) {
      const double sn = std::sin(th), cs = std::cos(th);
      const double u = h * h * sn * sn;
      const double one_minus_u = (1.0 - h * h) + h * h * cs * cs;
      const double rest = std::sqrt(std::max(0.0, (r2 - u) * (r3 - u)));
      return lead * h * h * cs * cs * rest / one_minus_u;
    };
    t.I_eta = (2.0 / M_PI) * integrate(f, 0.0, 0.5 * M_PI, quad_tol, err);
  }

  // xi: s = mid + hw sin(th), (s - s_b)(s_c - s) = hw^2 cos^2(th)
  const double sb = std::sqrt(r2), sc = std::sqrt(r3);
  t.xi_interval = {sb, sc};
  const double mid = 0.5 * (sb + sc), hw = 0.5 * (sc - sb);
  if (hw > 0.0) {
    auto f = [&](double th) {
      const double sn = std::sin(th), cs = std::cos(th);
      const double s = mid + hw * sn;
      const double up = 2.0 * std::pow(std::sin(0.25 * M_PI + 0.5 * th), 2);  // 1 + sin
      const double sm1 = (sb - 1.0) + hw * up;
      const double rest = std::sqrt(std::max(0.0, (s + sb) * (s + sc) * (s * s - r1)));
      return lead * hw * hw * cs * cs * rest / (sm1 * (s + 1.0));
    };
    t.I_xi = (1.0 / M_PI) * integrate(f, -0.5 * M_PI, 0.5 * M_PI, quad_tol, err);
  }
  t.error_estimate = err / M_PI;
  return t;
}

double printed_action_sum(const ActionTriple& t) {
  return t.I_eta + t.I_xi + std::abs(t.I_phi);
}

double energy_action_sum(const ActionTriple& t) {
  return t.I_eta + 2.0 * t.I_xi + std::abs(t.I_phi);
}

SlopePair eta_slopes_at_zero(const OscillatorParams& prm, double E, double g, double h,
                             double quad_tol) {
  const double step = h * std::max(1.0, E / prm.omega);
  auto I = [&](double lz, double& err) {
    const auto t = action_integrals(prm, {E, lz, g}, quad_tol);
    err += t.error_estimate;
    return t.I_eta;
  };
  // second-order one-sided differences, then the same with half the step
  // to estimate truncation
  auto side = [&](double sgn, double k, double& err) {
    const double f0 = I(0.0, err), f1 = I(sgn * k, err), f2 = I(sgn * 2.0 * k, err);
    return sgn * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * k);
  };
  SlopePair sp;
  double qerr = 0.0;
  sp.plus = side(1.0, step, qerr);
  sp.minus = side(-1.0, step, qerr);
  double junk = 0.0;
  const double plus_half = side(1.0, 0.5 * step, junk);
  const double minus_half = side(-1.0, 0.5 * step, junk);
  sp.error = 4.0 * qerr / step + std::abs(sp.plus - plus_half) + std::abs(sp.minus - minus_half);
  sp.mismatch = std::abs(sp.plus - sp.minus) > 10.0 * sp.error;
  return sp;
}

EbkPoint ebk_point(const OscillatorParams& prm, int m, int n_eta, int n_xi, const EbkOptions& opt) {
  if (n_eta < 0 || n_xi < 0) throw InputError("quantum numbers must be nonnegative");
  prm.validate();
  const double hb = prm.hbar, w = prm.omega;
  EbkPoint pt;
  pt.m = m;
  pt.n_eta = n_eta;
  pt.n_xi = n_xi;
  pt.lz = hb * m;
  pt.lz_eff = hb * (std::abs(m) + (opt.langer ? 0.5 : 0.0));
  const double Ieta = hb * (n_eta + 0.5), Ixi = hb * (n_xi + 0.5);
  pt.E = w * (Ieta + 2.0 * Ixi + pt.lz_eff);

  const auto gr = g_range(prm, pt.E, pt.lz_eff);
  auto f = [&](double g) {
    return action_integrals(prm, {pt.E, pt.lz_eff, g}, opt.quad_tol).I_eta - Ieta;
  };
  // at g_min the eta cycle shrinks to nothing, at g_max the xi cycle does
  const double flo = -Ieta, fhi = pt.E / w - pt.lz_eff - Ieta;
  if (!(flo < 0.0 && fhi > 0.0) || !(gr.g_max > gr.g_min))
    throw DomainError("ebk: quantized eta action not bracketed for m=" + std::to_string(m));
  boost::uintmax_t iters = 100;
  const double span = gr.g_max - gr.g_min;
  auto tol = [&](double x, double y) { return std::abs(x - y) <= opt.root_tol * std::max(1.0, span); };
  const auto r = boost::math::tools::toms748_solve(f, gr.g_min, gr.g_max, flo, fhi, tol, iters);
  pt.g = 0.5 * (r.first + r.second);
  pt.xi_residual = action_integrals(prm, {pt.E, pt.lz_eff, pt.g}, opt.quad_tol).I_xi - Ixi;
  return pt;
}

EbkSpectrum ebk_spectrum(const OscillatorParams& prm, int n, const EbkOptions& opt) {
  if (n < 0) throw InputError("n must be nonnegative");
  struct Job {
    int m, ne, nx;
  };
  std::vector<Job> jobs;
  for (int m = 0; m <= n; ++m)
    for (int nx = 0; n - m - 2 * nx >= 0; ++nx) jobs.push_back({m, n - m - 2 * nx, nx});
  std::vector<EbkPoint> half(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    half[i] = ebk_point(prm, jobs[i].m, jobs[i].ne, jobs[i].nx, opt);
  });

  EbkSpectrum sp;
  sp.n = n;
  for (const auto& p : half) {
    sp.points.push_back(p);
    if (p.m != 0) {
      auto q = p;
      q.m = -p.m;
      q.lz = -p.lz;
      sp.points.push_back(q);
    }
  }
  std::sort(sp.points.begin(), sp.points.end(), [](const EbkPoint& a, const EbkPoint& b) {
    return a.m != b.m ? a.m < b.m : a.g < b.g;
  });
  sp.energy_offset = (opt.langer ? 0.5 : 0.0) * prm.hbar * prm.omega;
  if (!half.empty()) sp.energy_offset = half.front().E - prm.hbar * prm.omega * (n + 1.5);
  return sp;
}

namespace {

double mean_gap(const std::vector<double>& c, std::size_t i) {
  double sum = 0.0;
  int cnt = 0;
  if (i > 0) sum += c[i] - c[i - 1], ++cnt;
  if (i + 1 < c.size()) sum += c[i + 1] - c[i], ++cnt;
  return sum / cnt;
}

}  // namespace

EbkComparison compare_ebk(const EbkSpectrum& sc, const JointSpectrum& exact) {
  if (sc.n != exact.n) throw InputError("compare_ebk: shells differ");
  EbkComparison cmp;
  std::size_t hits = 0;
  for (const auto& p : sc.points) {
    const auto it = exact.columns.find(p.m);
    if (it == exact.columns.end()) throw InputError("compare_ebk: exact column missing");
    const auto& c = it->second;
    std::size_t best = 0;
    for (std::size_t i = 1; i < c.size(); ++i)
      if (std::abs(c[i] - p.g) < std::abs(c[best] - p.g)) best = i;
    EbkMatch mt;
    mt.nearest_exact = c[best];
    if (c.size() > 1) {
      mt.local_spacing = mean_gap(c, best);
    } else {
      // step toward m = 0 until a column has a gap to offer
      const int dir = p.m > 0 ? -1 : 1;
      for (int m = p.m + dir;; m += dir) {
        const auto jt = exact.columns.find(m);
        if (jt == exact.columns.end()) break;
        if (jt->second.size() > 1) {
          const auto& d = jt->second;
          std::size_t b = 0;
          for (std::size_t i = 1; i < d.size(); ++i)
            if (std::abs(d[i] - p.g) < std::abs(d[b] - p.g)) b = i;
          mt.local_spacing = mean_gap(d, b);
          break;
        }
        if (m == 0) break;
      }
    }
    mt.within = std::abs(p.g - mt.nearest_exact) < mt.local_spacing;
    hits += mt.within;
    cmp.matches.push_back(mt);
  }
  cmp.fraction_within = sc.points.empty() ? 1.0 : static_cast<double>(hits) / sc.points.size();
  return cmp;
}

}  // namespace oscmono

#include "oscmono/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "oscmono/reduction.hpp"

namespace oscmono {

namespace {

std::string site_name(const LatticeSite& w) {
  return "(m=" + std::to_string(w.m) + ", rank=" + std::to_string(w.rank) + ")";
}

const std::vector<double>& column(const JointSpectrum& js, int m) {
  const auto it = js.columns.find(m);
  if (it == js.columns.end()) throw DomainError("column m=" + std::to_string(m) + " is empty");
  return it->second;
}

// g -> fractional rank within column m, extended linearly past both ends
double frac_rank(const std::vector<double>& c, double g) {
  const std::size_t L = c.size();
  if (L == 1) return 0.0;
  if (g < c.front()) return (g - c[0]) / (c[1] - c[0]);
  if (g > c.back()) return (L - 1) + (g - c[L - 1]) / (c[L - 1] - c[L - 2]);
  const auto it = std::upper_bound(c.begin(), c.end(), g);
  const std::size_t i = std::min<std::size_t>(it - c.begin(), L - 1);
  const double lo = c[i - 1], hi = c[i];
  return (i - 1) + (hi > lo ? (g - lo) / (hi - lo) : 0.0);
}

struct Match {
  int rank = -1;
  double best = 0.0;
  bool tie = false;
};

// rank in column W.m + 1 whose fractional height seen from column W.m, minus
// W.rank, is closest to target
Match match(const JointSpectrum& js, const LatticeSite& W, double target, double tol) {
  const auto& base = column(js, W.m);
  const auto it = js.columns.find(W.m + 1);
  Match r;
  if (it == js.columns.end()) return r;
  std::vector<std::pair<double, int>> d;
  for (std::size_t i = 0; i < it->second.size(); ++i)
    d.push_back({std::abs(frac_rank(base, it->second[i]) - W.rank - target), static_cast<int>(i)});
  std::sort(d.begin(), d.end());
  r.rank = d[0].second;
  r.best = d[0].first;
  r.tie = d.size() > 1 && d[1].first - d[0].first < tol * (d[0].first + d[1].first);
  if (r.tie) r.rank = std::max(d[0].second, d[1].second);
  return r;
}

IntMatrix2 transvection(long delta) { return {{{1, delta}, {0, 1}}}; }

}  // namespace

IntMatrix2 matmul(const IntMatrix2& a, const IntMatrix2& b) {
  IntMatrix2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

IntMatrix2 inverse_unimodular(const IntMatrix2& a) {
  const long d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  if (d != 1 && d != -1) throw InputError("matrix is not unimodular");
  return {{{a[1][1] * d, -a[0][1] * d}, {-a[1][0] * d, a[0][0] * d}}};
}

int loop_winding(const JointSpectrum& js, const std::vector<LatticeSite>& pts) {
  double total = 0.0;
  auto ang = [&](const LatticeSite& w) {
    return std::atan2(column(js, w.m).at(w.rank), js.params.hbar * w.m);
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double d = ang(pts[i + 1]) - ang(pts[i]);
    d = std::remainder(d, 2.0 * M_PI);
    total += d;
  }
  return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

LatticeLoop make_loop(const JointSpectrum& js, std::vector<LatticeSite> pts) {
  if (pts.size() < 3) throw InputError("loop needs at least three waypoints");
  if (!(pts.front() == pts.back())) pts.push_back(pts.front());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& c = column(js, pts[i].m);
    if (pts[i].rank < 0 || pts[i].rank >= static_cast<int>(c.size()))
      throw InputError("waypoint " + site_name(pts[i]) + " is outside the spectrum");
    if (i > 0 && std::abs(pts[i].m - pts[i - 1].m) > 1)
      throw InputError("consecutive waypoints must be lattice adjacent");
  }
  LatticeLoop loop;
  loop.waypoints = std::move(pts);
  loop.winding = loop_winding(js, loop.waypoints);
  loop.encloses_origin = loop.winding != 0;
  return loop;
}

LatticeLoop reversed(const LatticeLoop& loop) {
  LatticeLoop r = loop;
  std::reverse(r.waypoints.begin(), r.waypoints.end());
  r.winding = -loop.winding;
  return r;
}

LatticeLoop rebased(const LatticeLoop& loop, std::size_t start) {
  const auto& w = loop.waypoints;
  if (w.size() < 2 || start >= w.size() - 1) throw InputError("start index outside the loop");
  LatticeLoop r = loop;
  r.waypoints.assign(w.begin() + start, w.end() - 1);
  r.waypoints.insert(r.waypoints.end(), w.begin(), w.begin() + start);
  r.waypoints.push_back(r.waypoints.front());
  return r;
}

LatticeLoop rectangle_loop(const JointSpectrum& js, int M, int lo, int hi, bool allow_boundary) {
  if (M < 1) throw InputError("loop half-width must be at least 1");
  const auto& prm = js.params;
  const double E = js.energy();
  const auto& c0 = column(js, 0);
  if (lo < 0 || hi >= static_cast<int>(c0.size()) || lo >= hi)
    throw DomainError("rank window outside column 0");
  std::map<int, GRange> env;
  for (int m = -M; m <= M; ++m) env[m] = g_range(prm, E, prm.hbar * m);
  auto rho = [&](int m, double g) { return (g - env[m].g_min) / (env[m].g_max - env[m].g_min); };
  const double t_lo = rho(0, c0[lo]), t_hi = rho(0, c0[hi]);
  auto nearest = [&](int m, double t) {
    const auto& c = column(js, m);
    int best = 0;
    for (int i = 1; i < static_cast<int>(c.size()); ++i)
      if (std::abs(rho(m, c[i]) - t) < std::abs(rho(m, c[best]) - t)) best = i;
    const int mn = allow_boundary ? 0 : 1;
    const int mx = static_cast<int>(c.size()) - (allow_boundary ? 1 : 2);
    return std::clamp(best, mn, std::max(mn, mx));
  };
  std::map<int, int> bot, top;
  for (int m = -M; m <= M; ++m) {
    bot[m] = nearest(m, t_lo);
    top[m] = nearest(m, t_hi);
  }
  bot[0] = lo;
  top[0] = hi;
  std::vector<LatticeSite> pts;
  for (int m = -M; m <= M; ++m) pts.push_back({m, bot[m]});
  for (int r = bot[M] + 1; r <= top[M]; ++r) pts.push_back({M, r});
  for (int m = M - 1; m >= -M; --m) pts.push_back({m, top[m]});
  for (int r = top[-M] - 1; r >= bot[-M]; --r) pts.push_back({-M, r});
  return make_loop(js, std::move(pts));
}

MonodromyResult transport_cell(const JointSpectrum& js, const LatticeLoop& loop, double tol) {
  const auto& pts = loop.waypoints;
  if (pts.size() < 2 || !(pts.front() == pts.back())) throw InputError("loop must be closed");
  MonodromyResult res;

  // initial v: neighbour in m + 1 at the same fractional height
  LatticeSite W = pts.front();
  const Match m0 = match(js, W, 0.0, tol);
  if (m0.rank < 0) throw TransportError("no column to the right of " + site_name(W));
  int s = m0.rank - W.rank;
  const int s0 = s;
  res.path.push_back({W, {0, 1}, {1, s}});

  for (std::size_t i = 1; i < pts.size(); ++i) {
    const LatticeSite& Wn = pts[i];
    const auto& right = js.columns.find(W.m + 1);
    const int partner = W.rank + s;
    if (right == js.columns.end() || partner < 0 || partner >= static_cast<int>(right->second.size()))
      throw TransportError("cell partner missing at " + site_name(W));
    const double offset = frac_rank(column(js, W.m), right->second[partner]) - W.rank;
    const Match mt = match(js, Wn, offset, tol);
    if (mt.rank < 0 || mt.best > 0.75) throw TransportError("no lattice match at " + site_name(Wn));
    if (mt.tie) throw TransportError("ambiguous lattice match at " + site_name(Wn));
    const int sn = mt.rank - Wn.rank;
    res.local_transitions.push_back(transvection(sn - s));
    s = sn;
    W = Wn;
    res.path.push_back({W, {0, 1}, {1, s}});
  }

  IntMatrix2 prod{{{1, 0}, {0, 1}}};
  for (const auto& t : res.local_transitions) prod = matmul(prod, t);
  if (prod != transvection(s - s0)) throw NumericalError("transition product is inconsistent");
  res.matrix = prod;
  res.trace = prod[0][0] + prod[1][1];
  res.det = prod[0][0] * prod[1][1] - prod[0][1] * prod[1][0];
  res.defect_detected = prod != IntMatrix2{{{1, 0}, {0, 1}}};
  if (res.defect_detected && std::abs(prod[0][1]) != 1)
    res.anomaly = "transvection with off-diagonal " + std::to_string(prod[0][1]) +
                  ", expected a single unit shear";
  if (res.defect_detected && !loop.encloses_origin)
    res.anomaly += std::string(res.anomaly.empty() ? "" : "; ") + "defect on a loop not enclosing (0,0)";
  return res;
}

MonodromyReport monodromy_report(const JointSpectrum& js, int k) {
  if (k < 0) throw InputError("loop radius must be nonnegative");
  const int n = js.n;
  if (n < 4) throw DomainError("spectrum too sparse for a loop (n < 4); increase n");
  MonodromyReport rep;
  rep.n = n;
  rep.E = js.energy();
  const auto hv = hopf_and_singular_fiber(js.params, rep.E);
  rep.E_c = hv.E_c;
  rep.pinched = hv.pinched;

  const int M = std::min(n / 2, 5);
  const auto& c0 = column(js, 0);
  const int L = static_cast<int>(c0.size());
  int rb = -1;
  for (int i = 0; i < L; ++i)
    if (c0[i] < 0.0) rb = i;
  const bool can_enclose = rb >= 0 && rb + 1 <= L - 1;

  struct Attempt {
    std::string kind;
    int lo, hi;
    bool boundary;
  };
  std::vector<Attempt> tries;
  if (can_enclose) {
    if (rb - k >= 1 && rb + 1 + k <= L - 2) tries.push_back({"interior", rb - k, rb + 1 + k, false});
    int lo = rb - k, hi = rb + 1 + k;
    if (hi > L - 1) {
      lo -= hi - (L - 1);
      hi = L - 1;
    }
    if (lo < 0) {
      hi += -lo;
      lo = 0;
    }
    if (hi <= L - 1) tries.push_back({"boundary", lo, hi, true});
  } else {
    // origin lies outside the column range: a window just below it
    const int hi = std::min(L - 2, rb - 1), lo = hi - (2 * k + 1);
    if (lo >= 1) tries.push_back({"below", lo, hi, false});
  }
  if (tries.empty())
    throw DomainError("spectrum too sparse to place a loop at n=" + std::to_string(n) +
                      "; increase n");

  std::string why;
  for (const auto& t : tries) {
    try {
      rep.loop = rectangle_loop(js, M, t.lo, t.hi, t.boundary);
      rep.result = transport_cell(js, rep.loop);
      rep.loop_kind = t.kind;
      rep.consistent = rep.result.defect_detected == rep.pinched;
      return rep;
    } catch (const TransportError& e) {
      why += (why.empty() ? "" : "; ") + t.kind + ": " + e.what();
    }
  }
  throw TransportError("cell transport failed at n=" + std::to_string(n) + " (" + why +
                       "); a larger n gives a denser lattice");
}

MonodromyReport monodromy_report(const OscillatorParams& prm, int n, int k) {
  if (n < 0) throw InputError("n must be nonnegative");
  if (k < 0) throw InputError("loop radius must be nonnegative");
  if (n < 4) throw DomainError("spectrum too sparse for a loop (n < 4); increase n");
  return monodromy_report(joint_spectrum(prm, n), k);
}

}  // namespace oscmono

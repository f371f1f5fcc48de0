#include "oscmono/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oscmono/errors.hpp"
#include "oscmono/parallel.hpp"

namespace oscmono {

SubspaceBasis subspace_basis_direct(int n, int m) {
  if (n < 0) throw InputError("n must be nonnegative");
  if (std::abs(m) > n)
    throw DomainError("empty subspace: |m| = " + std::to_string(std::abs(m)) + " > n = " +
                      std::to_string(n));
  SubspaceBasis b;
  b.n = n;
  b.m = m;
  b.k_min = std::max(0, m);
  b.k_max = (n + m) / 2;  // n + m >= 0
  for (int k = b.k_min; k <= b.k_max; ++k) b.states.push_back({k, k - m, n + m - 2 * k});
  return b;
}

SubspaceBasis subspace_basis(int n, int m) {
  if (m >= 0) return subspace_basis_direct(n, m);
  SubspaceBasis b = subspace_basis_direct(n, -m);
  b.m = m;
  for (auto& s : b.states) std::swap(s.k1, s.k2);
  b.k_min = b.states.front().k1;
  b.k_max = b.states.back().k1;
  return b;
}

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Explicit: return "explicit";
    case Provenance::LadderOracle: return "ladder_oracle";
    case Provenance::Heun: return "heun";
  }
  return "?";
}

// Entries for m >= 0 with k = k1. The printed diagonal carries hbar^2/omega on
// the last term and 2 as the constant; the operator form needs hbar^2 and 3.
double g_diagonal_element(const OscillatorParams& prm, int n, int m, int k) {
  const double hb = prm.hbar, a2w = prm.a * prm.a * prm.omega;
  const double K = k, M = m, N = n;
  return 2.0 * hb * a2w * (M - 1.0 - 2.0 * K) -
         hb * hb * (3.0 + 8.0 * K * (1.0 + K) - 4.0 * M - 8.0 * K * M + M * M) +
         hb * hb * (1.0 + 2.0 * K - M) * (3.0 + 2.0 * N);
}

double g_offdiagonal_element(const OscillatorParams& prm, int n, int m, int k) {
  const double K = k, M = m, N = n;
  const double arg = (K + 1.0) * (K + 1.0 - M) * (N + M - 2.0 * K) * (N + M - 2.0 * K - 1.0);
  return 2.0 * prm.hbar * prm.hbar * std::sqrt(std::max(0.0, arg));
}

namespace {

// A ket as a short list of (state, amplitude). Operators act termwise.
using Ket = std::vector<std::pair<FockState, double>>;

int& occ(FockState& s, int mode) { return mode == 1 ? s.k1 : mode == 2 ? s.k2 : s.k3; }

Ket lower(const Ket& in, int mode) {
  Ket out;
  for (auto [s, c] : in) {
    const int k = occ(s, mode);
    if (k == 0) continue;
    occ(s, mode) = k - 1;
    out.push_back({s, c * std::sqrt(static_cast<double>(k))});
  }
  return out;
}

Ket raise(const Ket& in, int mode) {
  Ket out;
  for (auto [s, c] : in) {
    const int k = occ(s, mode);
    occ(s, mode) = k + 1;
    out.push_back({s, c * std::sqrt(static_cast<double>(k + 1))});
  }
  return out;
}

Ket number(const Ket& in, int mode) { return raise(lower(in, mode), mode); }

Ket scaled(Ket k, double f) {
  for (auto& t : k) t.second *= f;
  return k;
}

void add_into(Ket& acc, const Ket& k) { acc.insert(acc.end(), k.begin(), k.end()); }

// operators on a ket, each built only from a_i and a_i^dagger
struct Ops {
  OscillatorParams p;

  Ket Lz(const Ket& k) const {
    Ket r = scaled(number(k, 1), p.hbar);
    add_into(r, scaled(number(k, 2), -p.hbar));
    return r;
  }
  Ket R(const Ket& k) const {
    Ket r = scaled(number(k, 1), p.hbar);
    add_into(r, scaled(number(k, 2), p.hbar));
    add_into(r, scaled(k, p.hbar));
    return r;
  }
  Ket H(const Ket& k) const {
    const double e = p.hbar * p.omega;
    Ket r = scaled(number(k, 1), e);
    add_into(r, scaled(number(k, 2), e));
    add_into(r, scaled(number(k, 3), e));
    add_into(r, scaled(k, 1.5 * e));
    return r;
  }
  // 2 hbar^2 w (a1+ a2+ a3 a3 + a1 a2 a3+ a3+ - 1/2), ordering kept as written
  Ket X(const Ket& k) const {
    const double c = 2.0 * p.hbar * p.hbar * p.omega;
    Ket r = scaled(raise(raise(lower(lower(k, 3), 3), 2), 1), c);
    add_into(r, scaled(lower(lower(raise(raise(k, 3), 3), 2), 1), c));
    add_into(r, scaled(k, -0.5 * c));
    return r;
  }
  // G = Lz^2 - 2 R^2 - (2/w)(a^2 w^2 - H) R + X/w
  Ket G(const Ket& k) const {
    const double w = p.omega;
    Ket r = Lz(Lz(k));
    add_into(r, scaled(R(R(k)), -2.0));
    const Ket Rk = R(k);
    add_into(r, scaled(Rk, -(2.0 / w) * p.a * p.a * w * w));
    add_into(r, scaled(H(Rk), 2.0 / w));
    add_into(r, scaled(X(k), 1.0 / w));
    return r;
  }
};

SymmetricTridiagonal oracle_matrix(const OscillatorParams& prm, const SubspaceBasis& b) {
  const int dim = b.dimension();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
  const Ops ops{prm};
  for (int j = 0; j < dim; ++j) {
    for (const auto& [s, c] : ops.G({{b.states[j], 1.0}})) {
      const auto it = std::find(b.states.begin(), b.states.end(), s);
      if (it == b.states.end()) {
        if (c != 0.0) throw NumericalError("ladder oracle left the (n, m) subspace");
        continue;
      }
      M(it - b.states.begin(), j) += c;
    }
  }
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const bool band = std::abs(i - j) <= 1;
      if (!band && std::abs(M(i, j)) > 1e-13 * scale)
        throw NumericalError("oracle matrix is not tridiagonal");
      if (band && std::abs(M(i, j) - M(j, i)) > 1e-13 * scale)
        throw NumericalError("oracle matrix is not symmetric");
    }
  SymmetricTridiagonal t;
  t.provenance = Provenance::LadderOracle;
  for (int i = 0; i < dim; ++i) t.diag.push_back(M(i, i));
  for (int i = 0; i + 1 < dim; ++i) t.offdiag.push_back(M(i, i + 1));
  return t;
}

}  // namespace

SymmetricTridiagonal build_g_matrix(const OscillatorParams& prm, int n, int m, Provenance method) {
  prm.validate(true);
  const SubspaceBasis b = subspace_basis(n, m);
  if (method == Provenance::LadderOracle) return oracle_matrix(prm, b);
  if (method != Provenance::Explicit)
    throw InputError("build_g_matrix: method must be explicit or ladder_oracle");
  // k1 <-> k2 leaves G unchanged, so negative m reuses the |m| entries
  const int am = std::abs(m);
  SymmetricTridiagonal t;
  t.provenance = Provenance::Explicit;
  const int kmin = am, kmax = (n + am) / 2;
  for (int k = kmin; k <= kmax; ++k) {
    t.diag.push_back(g_diagonal_element(prm, n, am, k));
    if (k < kmax) t.offdiag.push_back(g_offdiagonal_element(prm, n, am, k));
  }
  return t;
}

namespace {

void check_finite(const SymmetricTridiagonal& t) {
  if (t.diag.empty()) throw InputError("empty matrix");
  if (t.offdiag.size() + 1 != t.diag.size()) throw InputError("offdiag must have length dim-1");
  for (double x : t.diag)
    if (!std::isfinite(x)) throw InputError("non-finite diagonal entry");
  for (double x : t.offdiag)
    if (!std::isfinite(x)) throw InputError("non-finite off-diagonal entry");
}

}  // namespace

int sturm_count(const SymmetricTridiagonal& t, double x) {
  const double tiny = std::numeric_limits<double>::min();
  int count = 0;
  double q = t.diag[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < t.diag.size(); ++i) {
    // a zero off-diagonal restarts the recurrence, which splits the chain
    if (q == 0.0) q = tiny;
    const double e = t.offdiag[i - 1];
    q = t.diag[i] - x - e * e / q;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> eigen_tridiagonal(const SymmetricTridiagonal& t, double tol) {
  check_finite(t);
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  const int dim = t.size();
  if (dim == 1) return {t.diag[0]};
  // Gershgorin interval
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < dim; ++i) {
    const double r = (i > 0 ? std::abs(t.offdiag[i - 1]) : 0.0) +
                     (i + 1 < dim ? std::abs(t.offdiag[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double width = std::max(hi - lo, std::numeric_limits<double>::min());
  lo -= 1e-12 * width + 1e-300;
  hi += 1e-12 * width + 1e-300;
  const double eps = std::max(tol * width, 4.0 * std::numeric_limits<double>::epsilon() *
                                               std::max(std::abs(lo), std::abs(hi)));
  std::vector<double> out(dim);
  for (int j = 0; j < dim; ++j) {
    // j-th eigenvalue: smallest x with count(x) > j
    double a = lo, b = hi;
    while (b - a > eps) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (sturm_count(t, mid) > j)
        b = mid;
      else
        a = mid;
    }
    out[j] = 0.5 * (a + b);
  }
  return out;
}

std::size_t JointSpectrum::size() const {
  std::size_t s = 0;
  for (const auto& [m, col] : columns) s += col.size();
  return s;
}

JointSpectrum joint_spectrum(const OscillatorParams& prm, int n) {
  if (n < 0) throw InputError("n must be nonnegative");
  prm.validate(true);
  JointSpectrum js;
  js.n = n;
  js.params = prm;
  std::vector<std::vector<double>> half(n + 1);
  parallel_for(half.size(), [&](std::size_t m) {
    half[m] = eigen_tridiagonal(build_g_matrix(prm, n, static_cast<int>(m)));
  });
  for (int m = 0; m <= n; ++m) {
    js.columns[m] = half[m];
    if (m > 0) js.columns[-m] = half[m];
  }
  const std::size_t expect = static_cast<std::size_t>(n + 1) * (n + 2) / 2;
  if (js.size() != expect) throw NumericalError("joint spectrum state count mismatch");
  return js;
}

int heun_shell(int m, int d, Parity parity) { return m + 2 * d + (parity == Parity::Odd ? 1 : 0); }

std::vector<double> heun_spectrum(const OscillatorParams& prm, int m, int d, Parity parity) {
  if (m < 0 || d < 0) throw InputError("heun: m and d must be nonnegative");
  prm.validate(true);
  const double hb = prm.hbar, w = prm.omega, a2 = prm.a * prm.a;
  const int n = heun_shell(m, d, parity);
  const double E = hb * w * (n + 1.5);
  const int off = parity == Parity::Odd ? 1 : 0;
  const int dim = d + 1;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    const double k = 2.0 * j + off;
    M(j, j) = a2 * hb * w * (2.0 * k + 1.0) + hb * hb * (m + k) * (m + k + 1.0);
    if (j > 0) M(j, j - 1) = 2.0 * a2 * (E - hb * w * (m + k - 0.5));
    if (j + 1 < dim) M(j, j + 1) = -hb * hb * (k + 1.0) * (k + 2.0);
  }
  // sub*super products are negative here, so no real diagonal similarity
  // symmetrizes M; use the general solver and insist on a real spectrum
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  if (es.info() != Eigen::Success) throw NumericalError("heun recursion eigensolver failed");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  std::vector<double> g;
  for (int i = 0; i < dim; ++i) {
    const auto z = es.eigenvalues()[i];
    if (std::abs(z.imag()) > 1e-8 * scale) throw NumericalError("heun recursion gave a complex eigenvalue");
    g.push_back(z.real() - 2.0 * a2 * E);
  }
  std::sort(g.begin(), g.end());
  return g;
}

LimitMode parse_limit_mode(const std::string& s) {
  if (s == "cartesian") return LimitMode::Cartesian;
  if (s == "prolate_infinity") return LimitMode::ProlateInfinity;
  if (s == "spherical") return LimitMode::Spherical;
  throw InputError("unknown limit mode '" + s + "' (cartesian, prolate_infinity, spherical)");
}

std::string limit_mode_name(LimitMode mode) {
  switch (mode) {
    case LimitMode::Cartesian: return "cartesian";
    case LimitMode::ProlateInfinity: return "prolate_infinity";
    case LimitMode::Spherical: return "spherical";
  }
  return "?";
}

LimitLattice limit_joint_spectrum(const OscillatorParams& prm, int n, LimitMode mode) {
  if (n < 0) throw InputError("n must be nonnegative");
  prm.validate();
  const double hb = prm.hbar, w = prm.omega, E = hb * w * (n + 1.5);
  LimitLattice ll;
  ll.mode = mode;
  ll.n = n;
  switch (mode) {
    case LimitMode::Cartesian:
      for (int nx = 0; nx <= n; ++nx)
        for (int ny = 0; nx + ny <= n; ++ny)
          ll.points.push_back({hb * w * (nx + 0.5), hb * w * (ny + 0.5)});
      ll.vertices = {{0.0, 0.0}, {0.0, E}, {E, 0.0}};
      break;
    case LimitMode::ProlateInfinity:
      // (lz, (Ax + Ay)/w) = hbar (k1 - k2, k1 + k2 + 1)
      for (int k1 = 0; k1 <= n; ++k1)
        for (int k2 = 0; k1 + k2 <= n; ++k2)
          ll.points.push_back({hb * (k1 - k2), hb * (k1 + k2 + 1)});
      ll.vertices = {{0.0, 0.0}, {E / w, E / w}, {-E / w, E / w}};
      break;
    case LimitMode::Spherical:
      for (int l = n % 2; l <= n; l += 2) {
        for (int m = -l; m <= l; ++m) ll.points.push_back({hb * m, hb * l});
        ll.layer_g.push_back(hb * hb * l * (l + 1.0));
      }
      ll.vertices = {{0.0, 0.0}, {E / w, E / w}, {-E / w, E / w}};
      break;
  }
  std::sort(ll.points.begin(), ll.points.end());
  return ll;
}

}  // namespace oscmono

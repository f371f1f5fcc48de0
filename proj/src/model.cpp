#include "oscmono/model.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/AutoDiff>

#include <algorithm>
#include <cmath>
#include <string>

namespace oscmono {

void OscillatorParams::validate(bool allow_zero_a) const {
  if (!(a > 0.0 || (allow_zero_a && a == 0.0)) || !std::isfinite(a))
    throw InputError(allow_zero_a ? "a must be nonnegative" : "a must be positive");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw InputError("omega must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InputError("hbar must be positive");
}

namespace {

using Grad6 = Eigen::Matrix<double, 6, 1>;
using Jet = Eigen::AutoDiffScalar<Grad6>;

template <class T>
struct All {
  T A[3], B[3], L[3];
  T H, G, R, X, Y, C2, C3;
};

// Every integral is a polynomial in (r, p); written once, evaluated on
// plain doubles or on jets carrying the exact gradient.
template <class T>
All<T> compute(const T (&q)[3], const T (&p)[3], double a, double w) {
  All<T> o;
  const double w2 = w * w;
  for (int k = 0; k < 3; ++k) o.A[k] = 0.5 * (p[k] * p[k] + w2 * q[k] * q[k]);
  o.B[0] = p[1] * p[2] + w2 * q[1] * q[2];
  o.B[1] = p[0] * p[2] + w2 * q[0] * q[2];
  o.B[2] = p[0] * p[1] + w2 * q[0] * q[1];
  o.L[0] = q[1] * p[2] - q[2] * p[1];
  o.L[1] = q[2] * p[0] - q[0] * p[2];
  o.L[2] = q[0] * p[1] - q[1] * p[0];
  o.H = o.A[0] + o.A[1] + o.A[2];
  const T L2 = o.L[0] * o.L[0] + o.L[1] * o.L[1] + o.L[2] * o.L[2];
  o.G = L2 - 2.0 * a * a * (o.A[0] + o.A[1]);
  o.R = (o.A[0] + o.A[1]) / w;
  o.X = w * (o.L[0] * o.L[0] + o.L[1] * o.L[1]) - 2.0 * o.A[2] * o.R;
  // fixed by {R,X} = -2Y
  const T rho_p = q[0] * p[0] + q[1] * p[1];
  o.Y = rho_p * (p[2] * p[2] - w2 * q[2] * q[2]) -
        q[2] * p[2] * (p[0] * p[0] + p[1] * p[1] - w2 * (q[0] * q[0] + q[1] * q[1]));

  T c2 = w2 * L2;
  for (int k = 0; k < 3; ++k) c2 += 2.0 * o.A[k] * o.A[k] + o.B[k] * o.B[k];
  o.C2 = c2;

  // w_k = B_k + i w L_k, real part of w_x w_y w_z expanded by hand
  T re = o.B[0] * o.B[1] * o.B[2] -
         w2 * (o.B[0] * o.L[1] * o.L[2] + o.B[1] * o.L[0] * o.L[2] + o.B[2] * o.L[0] * o.L[1]);
  T c3 = 6.0 * re;
  for (int k = 0; k < 3; ++k) {
    const T d = o.H - 3.0 * o.A[k];
    c3 += 2.0 * (o.B[k] * o.B[k] + w2 * o.L[k] * o.L[k]) * d - (8.0 / 27.0) * d * d * d;
  }
  o.C3 = c3;
  return o;
}

template <class T>
const T& pick(const All<T>& o, IntegralId id) {
  switch (id) {
    case IntegralId::Ax: return o.A[0];
    case IntegralId::Ay: return o.A[1];
    case IntegralId::Az: return o.A[2];
    case IntegralId::Lx: return o.L[0];
    case IntegralId::Ly: return o.L[1];
    case IntegralId::Lz: return o.L[2];
    case IntegralId::Bx: return o.B[0];
    case IntegralId::By: return o.B[1];
    case IntegralId::Bz: return o.B[2];
    case IntegralId::H: return o.H;
    case IntegralId::G: return o.G;
    case IntegralId::R: return o.R;
    case IntegralId::X: return o.X;
    case IntegralId::Y: return o.Y;
    case IntegralId::C2: return o.C2;
    case IntegralId::C3: return o.C3;
  }
  throw InputError("unknown integral id");
}

constexpr std::array<std::string_view, 16> kNames = {"Ax", "Ay", "Az", "Lx", "Ly", "Lz",
                                                     "Bx", "By", "Bz", "H",  "G",  "R",
                                                     "X",  "Y",  "C2", "C3"};

}  // namespace

IntegralValues eval_integrals(const PhasePoint& pt, const OscillatorParams& prm) {
  for (int k = 0; k < 3; ++k)
    if (!std::isfinite(pt.r[k]) || !std::isfinite(pt.p[k]))
      throw InputError("phase point has non-finite components");
  const double q[3] = {pt.r[0], pt.r[1], pt.r[2]};
  const double p[3] = {pt.p[0], pt.p[1], pt.p[2]};
  const auto o = compute(q, p, prm.a, prm.omega);
  const double w = prm.omega;

  IntegralValues v;
  for (int k = 0; k < 3; ++k) {
    v.nine.A[k] = o.A[k];
    v.nine.B[k] = o.B[k];
    v.nine.L[k] = o.L[k];
  }
  v.motion = {o.H, o.L[2], o.G};
  v.reduced = {o.R, o.X, o.Y, o.C2, o.C3};
  const double lz = o.L[2];
  v.g_reduced_form =
      lz * lz - 2.0 * o.R * o.R - (2.0 / w) * (prm.a * prm.a * w * w - o.H) * o.R + o.X / w;
  const double hr = o.H - w * o.R;
  v.casimir = 4.0 * w * w * hr * hr * (o.R * o.R - lz * lz) - w * w * (o.X * o.X + o.Y * o.Y);
  return v;
}

IntegralId parse_integral(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<IntegralId>(i);
  throw InputError("unknown integral: " + std::string(name));
}

std::string_view integral_name(IntegralId id) {
  const auto i = static_cast<std::size_t>(id);
  if (i >= kNames.size()) throw InputError("unknown integral id");
  return kNames[i];
}

const std::array<IntegralId, 9>& nine_ids() {
  static const std::array<IntegralId, 9> ids = {IntegralId::Ax, IntegralId::Ay, IntegralId::Az,
                                                IntegralId::Lx, IntegralId::Ly, IntegralId::Lz,
                                                IntegralId::Bx, IntegralId::By, IntegralId::Bz};
  return ids;
}

ValueAndGradient integral_gradient(IntegralId id, const PhasePoint& pt,
                                   const OscillatorParams& prm) {
  Jet q[3], p[3];
  for (int k = 0; k < 3; ++k) {
    q[k] = Jet(pt.r[k], 6, k);
    p[k] = Jet(pt.p[k], 6, 3 + k);
  }
  const auto o = compute(q, p, prm.a, prm.omega);
  const Jet& j = pick(o, id);
  ValueAndGradient out;
  out.value = j.value();
  for (int k = 0; k < 6; ++k) out.grad[k] = j.derivatives().size() ? j.derivatives()[k] : 0.0;
  return out;
}

double integral_value(IntegralId id, const PhasePoint& pt, const OscillatorParams& prm) {
  const double q[3] = {pt.r[0], pt.r[1], pt.r[2]};
  const double p[3] = {pt.p[0], pt.p[1], pt.p[2]};
  return pick(compute(q, p, prm.a, prm.omega), id);
}

double poisson_bracket(IntegralId f, IntegralId g, const PhasePoint& pt,
                       const OscillatorParams& prm) {
  const auto df = integral_gradient(f, pt, prm);
  const auto dg = integral_gradient(g, pt, prm);
  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += df.grad[k] * dg.grad[3 + k] - df.grad[3 + k] * dg.grad[k];
  return s;
}

namespace {

void flow(const double (&y)[6], double w2, double (&dy)[6]) {
  for (int k = 0; k < 3; ++k) {
    dy[k] = y[3 + k];
    dy[3 + k] = -w2 * y[k];
  }
}

void rk4_step(double (&y)[6], double h, double w2) {
  double k1[6], k2[6], k3[6], k4[6], t[6];
  flow(y, w2, k1);
  for (int i = 0; i < 6; ++i) t[i] = y[i] + 0.5 * h * k1[i];
  flow(t, w2, k2);
  for (int i = 0; i < 6; ++i) t[i] = y[i] + 0.5 * h * k2[i];
  flow(t, w2, k3);
  for (int i = 0; i < 6; ++i) t[i] = y[i] + h * k3[i];
  flow(t, w2, k4);
  for (int i = 0; i < 6; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

Trajectory integrate_orbit(const PhasePoint& start, const OscillatorParams& prm, double t_max,
                           double dt) {
  if (!(dt > 0.0)) throw InputError("dt must be positive");
  if (!(t_max >= dt)) throw InputError("t_max must be at least dt");
  prm.validate();

  const double w2 = prm.omega * prm.omega;
  const auto steps = static_cast<long>(std::ceil(t_max / dt - 1e-12));
  const double h = t_max / static_cast<double>(steps);  // land exactly on t_max

  Trajectory tr;
  tr.t.reserve(steps + 1);
  tr.samples.reserve(steps + 1);
  double y[6] = {start.r[0], start.r[1], start.r[2], start.p[0], start.p[1], start.p[2]};
  const auto v0 = eval_integrals(start, prm);
  tr.t.push_back(0.0);
  tr.samples.push_back(start);
  for (long i = 1; i <= steps; ++i) {
    rk4_step(y, h, w2);
    PhasePoint pt{{y[0], y[1], y[2]}, {y[3], y[4], y[5]}};
    const auto v = eval_integrals(pt, prm);
    tr.drift[0] = std::max(tr.drift[0], std::abs(v.motion.E - v0.motion.E));
    tr.drift[1] = std::max(tr.drift[1], std::abs(v.motion.lz - v0.motion.lz));
    tr.drift[2] = std::max(tr.drift[2], std::abs(v.motion.g - v0.motion.g));
    tr.t.push_back(h * static_cast<double>(i));
    tr.samples.push_back(pt);
  }
  return tr;
}

}  // namespace oscmono

#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "oscmono/errors.hpp"

namespace oscmono {

using Vec3 = std::array<double, 3>;

struct OscillatorParams {
  double a = 1.0;
  double omega = 1.0;
  double hbar = 1.0;

  // the matrix side also accepts a = 0, the spherical limit
  void validate(bool allow_zero_a = false) const;
  double critical_energy() const { return 0.5 * omega * omega * a * a; }
};

struct PhasePoint {
  Vec3 r{};
  Vec3 p{};
};

struct NineIntegrals {
  Vec3 A{};
  Vec3 B{};
  Vec3 L{};
  double H() const { return A[0] + A[1] + A[2]; }
};

struct MotionValues {
  double E = 0.0;
  double lz = 0.0;
  double g = 0.0;
};

struct ReducedInvariants {
  double R = 0.0;
  double X = 0.0;
  double Y = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
};

struct IntegralValues {
  NineIntegrals nine;
  MotionValues motion;
  ReducedInvariants reduced;
  double g_reduced_form = 0.0;  // G rebuilt from (lz, R, X, H)
  double casimir = 0.0;         // C, vanishes identically
};

IntegralValues eval_integrals(const PhasePoint& pt, const OscillatorParams& prm);

enum class IntegralId { Ax, Ay, Az, Lx, Ly, Lz, Bx, By, Bz, H, G, R, X, Y, C2, C3 };

IntegralId parse_integral(std::string_view name);
std::string_view integral_name(IntegralId id);
const std::array<IntegralId, 9>& nine_ids();

struct ValueAndGradient {
  double value = 0.0;
  std::array<double, 6> grad{};  // d/dx, d/dy, d/dz, d/dpx, d/dpy, d/dpz
};

ValueAndGradient integral_gradient(IntegralId id, const PhasePoint& pt,
                                   const OscillatorParams& prm);
double integral_value(IntegralId id, const PhasePoint& pt, const OscillatorParams& prm);

// {f,g} = sum_k df/dr_k dg/dp_k - df/dp_k dg/dr_k
double poisson_bracket(IntegralId f, IntegralId g, const PhasePoint& pt,
                       const OscillatorParams& prm);

struct Trajectory {
  std::vector<double> t;
  std::vector<PhasePoint> samples;
  std::array<double, 3> drift{};  // H, Lz, G
};

Trajectory integrate_orbit(const PhasePoint& start, const OscillatorParams& prm, double t_max,
                           double dt);

}  // namespace oscmono

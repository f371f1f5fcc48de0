#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oscmono/model.hpp"

namespace oscmono {

// P(s) as a cubic in u = s^2: P = c0 + c1 u + c2 u^2 + c3 u^3
struct SeparationPolynomial {
  std::array<double, 4> c{};
  OscillatorParams params;
  MotionValues vals;

  double at_u(double u) const { return c[0] + u * (c[1] + u * (c[2] + u * c[3])); }
  double at_s(double s) const { return at_u(s * s); }
  double scale() const;  // max |c_i|
};

SeparationPolynomial separation_polynomial(const OscillatorParams& prm, const MotionValues& v);

enum class Disposition { ThreeRealDistinct, ThreeRealDouble, ThreeRealTriple, OneReal };

struct SRoot {
  double s = 0.0;
  int multiplicity = 1;
};

struct RootSet {
  std::array<std::complex<double>, 3> u_roots{};  // real ones ascending first
  std::vector<SRoot> s_roots;                     // signed real roots, ascending
  Disposition disposition = Disposition::OneReal;
  int real_count() const;
  std::vector<double> real_u() const;  // ascending, with multiplicity
};

RootSet polynomial_roots(const SeparationPolynomial& poly);

// Cardano, Newton polished. Coefficients of c0 + c1 x + c2 x^2 + c3 x^3, c3 != 0.
std::array<std::complex<double>, 3> cubic_roots(double c0, double c1, double c2, double c3);

double discriminant(const OscillatorParams& prm, const MotionValues& v);
// -Res(P, P')/lead of the degree-6 polynomial in s, from the Sylvester matrix
double discriminant_resultant(const SeparationPolynomial& poly);
// second factor of the closed form (the squared one), zero on the upper branch
double discriminant_upper_factor(const OscillatorParams& prm, const MotionValues& v);
double discriminant_upper_factor_scale(const OscillatorParams& prm, const MotionValues& v);

struct CriticalLoci {
  double E = 0.0;
  double L1 = 0.0;  // g = -2 a^2 E
  double L2 = 0.0;  // g = 0
  double L3 = 0.0;  // (a^2 w^2 - 2E)^2 / (4 w^2)
  double E_c = 0.0;
  bool isolated_point = false;
  bool kink = false;
};

CriticalLoci critical_loci(const OscillatorParams& prm, double E);

double lower_branch_g(const OscillatorParams& prm, double E, double lz);
// (lz^2(d), g(d)) of the double-root branch
std::pair<double, double> upper_branch_point(const OscillatorParams& prm, double E, double d);
// d where the admissible part of the upper branch starts (lz = 0)
double upper_branch_d_start(const OscillatorParams& prm, double E);
double upper_branch_d_for_lz(const OscillatorParams& prm, double E, double lz);
double upper_branch_g(const OscillatorParams& prm, double E, double lz);

enum class Region {
  I,
  II,
  III,
  IV,
  V,
  BoundaryL1,
  BoundaryL2,
  BoundaryL3,
  SpatialRegular,
  SpatialCritical,
  Nonphysical
};

std::string region_name(Region r);

struct Classification {
  Region label = Region::Nonphysical;
  bool admissible = false;
};

Classification classify(const OscillatorParams& prm, const MotionValues& v);

struct CausticData {
  std::vector<double> xi_turning;   // > 1
  std::vector<double> eta_turning;  // in (0, 1]
  std::string kind;
};

CausticData caustic(const OscillatorParams& prm, const MotionValues& v);

struct BifurcationSlice {
  double E = 0.0;
  std::vector<std::pair<double, double>> lower_branch;  // (lz, g)
  std::vector<std::pair<double, double>> upper_branch;
  std::optional<std::pair<double, double>> isolated_point;
  bool kink_present = false;
  CriticalLoci loci;
};

BifurcationSlice energy_slice(const OscillatorParams& prm, double E, int resolution);

}  // namespace oscmono

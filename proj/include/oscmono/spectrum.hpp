#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "oscmono/model.hpp"

namespace oscmono {

// occupations in the complex coordinates diagonalizing Lz
struct FockState {
  int k1 = 0, k2 = 0, k3 = 0;
  int n() const { return k1 + k2 + k3; }
  int m() const { return k1 - k2; }
  bool operator==(const FockState&) const = default;
  auto operator<=>(const FockState&) const = default;
};

struct SubspaceBasis {
  int n = 0, m = 0;
  int k_min = 0, k_max = 0;
  std::vector<FockState> states;  // |k, k-m, n+m-2k>, k ascending
  int dimension() const { return static_cast<int>(states.size()); }
};

// m < 0 is obtained from |m| by exchanging k1 and k2
SubspaceBasis subspace_basis(int n, int m);
// same rule applied literally for any sign of m
SubspaceBasis subspace_basis_direct(int n, int m);

enum class Provenance { Explicit, LadderOracle, Heun };
std::string provenance_name(Provenance p);

struct SymmetricTridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;
  Provenance provenance = Provenance::Explicit;
  int size() const { return static_cast<int>(diag.size()); }
};

// closed-form entries with the two corrections (constant 3, hbar^2 scale)
double g_diagonal_element(const OscillatorParams& prm, int n, int m, int k);
double g_offdiagonal_element(const OscillatorParams& prm, int n, int m, int k);  // <k|G|k+1>

SymmetricTridiagonal build_g_matrix(const OscillatorParams& prm, int n, int m,
                                    Provenance method = Provenance::LadderOracle);

// sorted eigenvalues by Sturm-count bisection; tol is relative to the spectral width
std::vector<double> eigen_tridiagonal(const SymmetricTridiagonal& t, double tol = 1e-15);
// number of eigenvalues strictly below x
int sturm_count(const SymmetricTridiagonal& t, double x);

struct JointSpectrum {
  int n = 0;
  OscillatorParams params;
  std::map<int, std::vector<double>> columns;  // m -> ascending g
  double energy() const { return params.hbar * params.omega * (n + 1.5); }
  std::size_t size() const;
};

JointSpectrum joint_spectrum(const OscillatorParams& prm, int n);

enum class Parity { Even, Odd };

// E = hbar w (m + 2d + 3/2) on the even chain, + 5/2 on the odd one
int heun_shell(int m, int d, Parity parity);
std::vector<double> heun_spectrum(const OscillatorParams& prm, int m, int d, Parity parity);

enum class LimitMode { Cartesian, ProlateInfinity, Spherical };
LimitMode parse_limit_mode(const std::string& s);
std::string limit_mode_name(LimitMode mode);

struct LimitLattice {
  LimitMode mode = LimitMode::Cartesian;
  int n = 0;
  std::vector<std::pair<double, double>> points;
  std::vector<std::pair<double, double>> vertices;
  std::vector<double> layer_g;  // spherical only: hbar^2 l(l+1), ascending in l
};

LimitLattice limit_joint_spectrum(const OscillatorParams& prm, int n, LimitMode mode);

}  // namespace oscmono

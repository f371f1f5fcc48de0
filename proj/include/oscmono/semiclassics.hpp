#pragma once

#include <utility>
#include <vector>

#include "oscmono/model.hpp"
#include "oscmono/spectrum.hpp"

namespace oscmono {

struct ActionTriple {
  double I_xi = 0.0;
  double I_eta = 0.0;
  double I_phi = 0.0;
  std::pair<double, double> eta_interval{};  // [-s, s] inside [-1, 1]
  std::pair<double, double> xi_interval{};   // inside [1, inf)
  double error_estimate = 0.0;
};

// I = (1/pi) int sqrt(P)/(1 - s^2) over the eta interval, likewise over the
// xi interval with s^2 - 1 in the denominator.
ActionTriple action_integrals(const OscillatorParams& prm, const MotionValues& v,
                              double quad_tol = 1e-10);

// Printed sum I_eta + I_xi + |lz| and the sum that actually reproduces E/omega
// with the normalization above (the xi cycle counts twice).
double printed_action_sum(const ActionTriple& t);
double energy_action_sum(const ActionTriple& t);

struct SlopePair {
  double plus = 0.0;   // dI_eta/dlz from lz = 0+
  double minus = 0.0;  // from lz = 0-
  double error = 0.0;  // quadrature plus truncation estimate
  bool mismatch = false;
};

SlopePair eta_slopes_at_zero(const OscillatorParams& prm, double E, double g, double h = 1e-4,
                             double quad_tol = 1e-12);

struct EbkOptions {
  bool langer = false;
  double quad_tol = 1e-10;
  double root_tol = 1e-12;
};

struct EbkPoint {
  int m = 0;
  int n_eta = 0;
  int n_xi = 0;
  double E = 0.0;
  double lz = 0.0;       // hbar m, where the point is plotted
  double lz_eff = 0.0;   // lz used in P (shifted by hbar/2 with Langer)
  double g = 0.0;
  double xi_residual = 0.0;  // I_xi - hbar (n_xi + 1/2)
};

EbkPoint ebk_point(const OscillatorParams& prm, int m, int n_eta, int n_xi,
                   const EbkOptions& opt = {});

struct EbkSpectrum {
  int n = 0;
  std::vector<EbkPoint> points;  // sorted by m, then g
  double energy_offset = 0.0;    // E_ebk - hbar w (n + 3/2)
};

// shell n collects n_eta + 2 n_xi + |m| = n
EbkSpectrum ebk_spectrum(const OscillatorParams& prm, int n, const EbkOptions& opt = {});

struct EbkMatch {
  double nearest_exact = 0.0;
  double local_spacing = 0.0;  // mean gap around the nearest exact eigenvalue
  bool within = false;         // |g_ebk - nearest| < local_spacing
};

struct EbkComparison {
  std::vector<EbkMatch> matches;  // parallel to EbkSpectrum::points
  double fraction_within = 0.0;
};

// Columns with a single state borrow the spacing of the nearest column with two or more.
EbkComparison compare_ebk(const EbkSpectrum& sc, const JointSpectrum& exact);

}  // namespace oscmono

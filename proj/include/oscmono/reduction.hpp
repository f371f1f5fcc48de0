#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "oscmono/model.hpp"

namespace oscmono {

struct ContourIntersection {
  double g = 0.0;
  std::vector<std::pair<double, double>> points;  // (R, X) on the boundary
  bool hits_origin_singularity = false;           // passes through R = 0 (lz = 0 only)
  bool hits_corner_singularity = false;           // passes through R = E/omega
};

struct ReducedSlice {
  double E = 0.0;
  double lz = 0.0;
  std::vector<std::pair<double, double>> upper;  // X = +2(E - wR) sqrt(R^2 - lz^2)
  std::vector<std::pair<double, double>> lower;
  std::vector<ContourIntersection> contours;
  std::vector<double> singular_R;
};

// X on the line G = g inside the slice Y = 0
double contour_X(const OscillatorParams& prm, double E, double lz, double g, double R);
double boundary_X(const OscillatorParams& prm, double E, double lz, double R);

ReducedSlice reduced_slice(const OscillatorParams& prm, double E, double lz, int resolution,
                           const std::vector<double>& contour_g = {});

struct GRange {
  double g_min = 0.0;
  double g_max = 0.0;
  double R_at_max = 0.0;
};

GRange g_range(const OscillatorParams& prm, double E, double lz);

struct HopfVerdict {
  double E_c = 0.0;
  bool pinched = false;
};

HopfVerdict hopf_and_singular_fiber(const OscillatorParams& prm, double E);

struct VolumeReport {
  double volume = 0.0;
  double weyl_count = 0.0;
  std::optional<long> exact_count;
};

VolumeReport symplectic_volume(const OscillatorParams& prm, double E, double lz);
long exact_state_count(long n, long m);
long total_states(long n);

}  // namespace oscmono

#pragma once

#include <array>
#include <string>
#include <vector>

#include "oscmono/errors.hpp"
#include "oscmono/spectrum.hpp"

namespace oscmono {

// ambiguous or failed nearest-neighbour match during cell transport
class TransportError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct LatticeSite {
  int m = 0;
  int rank = 0;  // position in the ascending column
  bool operator==(const LatticeSite&) const = default;
};

struct LatticeLoop {
  std::vector<LatticeSite> waypoints;  // closed: front == back
  int winding = 0;                     // of the (lz, g) polygon about (0, 0)
  bool encloses_origin = false;
};

using IntMatrix2 = std::array<std::array<long, 2>, 2>;

// u = (0, 1) steps within a column, v = (1, s) points to the neighbour in m + 1
struct CellFrame {
  LatticeSite at;
  std::array<int, 2> u{0, 1};
  std::array<int, 2> v{1, 0};
};

struct MonodromyResult {
  IntMatrix2 matrix{};
  long trace = 0;
  long det = 0;
  std::vector<CellFrame> path;
  std::vector<IntMatrix2> local_transitions;
  bool defect_detected = false;
  std::string anomaly;  // empty when the outcome is a unit transvection or the identity
};

int loop_winding(const JointSpectrum& js, const std::vector<LatticeSite>& pts);
LatticeLoop make_loop(const JointSpectrum& js, std::vector<LatticeSite> pts);
LatticeLoop reversed(const LatticeLoop& loop);
LatticeLoop rebased(const LatticeLoop& loop, std::size_t start);

// Rectangle |m| <= m_loop. Column 0 spans ranks [lo, hi]; other columns take
// the rank nearest the same relative height inside the classical g range.
LatticeLoop rectangle_loop(const JointSpectrum& js, int m_loop, int lo, int hi,
                           bool allow_boundary);

MonodromyResult transport_cell(const JointSpectrum& js, const LatticeLoop& loop,
                               double tie_tol = 0.1);

IntMatrix2 matmul(const IntMatrix2& a, const IntMatrix2& b);
IntMatrix2 inverse_unimodular(const IntMatrix2& a);

struct MonodromyReport {
  int n = 0;
  double E = 0.0;
  double E_c = 0.0;
  bool pinched = false;
  std::string loop_kind;  // interior | boundary | below
  LatticeLoop loop;
  MonodromyResult result;
  bool consistent = false;  // defect_detected == pinched
};

MonodromyReport monodromy_report(const OscillatorParams& prm, int n, int radius_hint = 1);
MonodromyReport monodromy_report(const JointSpectrum& js, int radius_hint = 1);

}  // namespace oscmono

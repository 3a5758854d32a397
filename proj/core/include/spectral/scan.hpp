#pragma once

#include <string>
#include <vector>

#include "spectral/curve.hpp"

namespace spectral {

/// One real axis of a parameter-plane scan. A value v sets t[t_index] = scale * v,
/// so the total 't Hooft parameter s is {"s", 0, -4}. t_index = -1 marks an inert axis
/// with at most one node, for one-dimensional scans.
struct ScanAxis {
  std::string name = "t1";
  int t_index = 0;
  double scale = 1.0;
  double lo = 0.0, hi = 0.0;
  int count = 0;  ///< zero gives an empty scan

  double value(int k) const { return count == 1 ? lo : lo + (hi - lo) * k / (count - 1); }
};

struct ScanSpec {
  Potential W = Potential::gaussian();
  CVec t_base;  ///< the remaining parameters, padded with zeros to N
  ScanAxis x, y;
  double classify_tol = 1e-7;
};

struct ScanRow {
  double x = 0.0, y = 0.0;
  int q = 0;             ///< the curve's own class M_q
  bool regular = true;   ///< in reg M_N: all roots of y^2 simple
  double min_dist = 0.0;
  cplx disc;
  std::string error;  ///< non-empty when the node failed; the other fields are then unset
};

/// Classify every node of the grid. Rows come back in row-major order (y outer, x inner)
/// whatever the number of threads. Per-node failures are recorded and the scan goes on.
std::vector<ScanRow> scan_grid(const ScanSpec& spec, int threads = 1);

/// A point where the real zero set of the discriminant is singular (D = 0, grad D = 0).
struct CriticalPoint {
  double x = 0.0, y = 0.0;  ///< refined location
  int i = 0, j = 0;         ///< nearest node
  double value = 0.0;       ///< fitted Re D there, relative to the window's max |Re D|
};

/// From a scan table alone: nodes ranked by |D| + h |grad D| seed a Newton search for
/// grad p = 0, p the least-squares quartic fit of Re D on the surrounding 7 x 7 nodes.
/// Stationary points with |p| below `zero_tol` (relative) are kept, best first, at most
/// `count`, merged when within one cell.
std::vector<CriticalPoint> discriminant_critical_points(const std::vector<ScanRow>& rows, int nx, int ny, int count,
                                                        double zero_tol = 1e-6);

}  // namespace spectral

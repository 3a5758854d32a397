#pragma once

#include <span>
#include <utility>
#include <vector>

#include "spectral/common.hpp"

namespace spectral {

/// Pairing of 2q branch points into q cuts.
///
/// Cut j runs from betas[pairs[j].first] to betas[pairs[j].second]. A cut is the
/// straight segment between its endpoints unless `via[j]` lists interior vertices,
/// in which case it is the polyline through them (used for deformation checks).
struct CutSystem {
  std::vector<std::pair<int, int>> pairs;
  std::vector<CVec> via;

  int q() const noexcept { return static_cast<int>(pairs.size()); }

  /// Sort by real part (ties by imaginary part) and pair consecutively.
  static CutSystem default_for(std::span<const cplx> betas);

  /// Throws InvalidArgument unless the pairs form a perfect matching of n indices.
  void validate(std::size_t n) const;
};

/// Geometry of a concrete cut layout: the branch of y0, one-sided limits, and the
/// reference direction that fixes the logarithm branch.
class CutGeometry {
 public:
  /// Throws CutConfigurationError when two cuts intersect.
  CutGeometry(CVec betas, CutSystem cuts, double on_cut_tol = 1e-12);

  int q() const noexcept { return cuts_.q(); }
  const CVec& betas() const noexcept { return betas_; }
  const CutSystem& cuts() const noexcept { return cuts_; }
  cplx start(int j) const;
  cplx end(int j) const;
  /// Vertices a, via..., b of cut j.
  const CVec& vertices(int j) const { return verts_[static_cast<std::size_t>(j)]; }
  bool straight(int j) const { return verts_[static_cast<std::size_t>(j)].size() == 2; }
  /// Branch points ordered along the cuts: start(0), end(0), start(1), ...
  CVec ordered_betas() const;

  /// y0(z) with y0 ~ z^q at infinity and cuts exactly on the segments.
  /// Throws OnCut when z is within tolerance of a cut.
  cplx y0(cplx z) const;
  /// y0 without the on-cut check, for points known to sit on the correct side.
  cplx y0_unchecked(cplx z) const;
  /// Product of the two-point factors of every cut except j.
  cplx others(int j, cplx z) const;

  /// Limit of y0 at a point of cut j approached from its left (+) side, i.e. the
  /// side i*d where d is the direction of travel from start to end.
  cplx y0_left(int j, cplx z) const;

  /// Left limit at the point a + t (b - a) of segment `seg` of cut j, given t and
  /// c = 1 - t separately. The distances to a and b are formed as t (b - a) and
  /// -c (b - a), so the square-root factors keep full accuracy at both ends.
  cplx y0_left_param(int j, std::size_t seg, double t, double c) const;

  /// Largest modulus among branch points and polyline vertices.
  double radius() const;

  /// Smallest distance from z to any cut; `which` receives the cut index.
  double distance_to_cuts(cplx z, int* which = nullptr) const;

  /// Unit vector e used for the reference path: from start(0) towards end(q-1),
  /// or the direction of the only cut when q = 1.
  cplx reference_direction() const;

  /// Throws CutConfigurationError unless every cut segment and every connector
  /// end(j) -> start(j+1) has positive projection on reference_direction(), and
  /// that direction has nonnegative real part.
  void check_monotone() const;

 private:
  cplx factor(int j, cplx z) const;
  CVec betas_;
  CutSystem cuts_;
  std::vector<CVec> verts_;
  double tol_;
};

}  // namespace spectral

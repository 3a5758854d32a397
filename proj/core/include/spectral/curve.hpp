#pragma once

#include <span>
#include <vector>

#include "spectral/common.hpp"
#include "spectral/polynomial.hpp"

namespace spectral {

/// W(z) = z^{N+1}/(N+1) + sum_{n=1}^{N} g_n z^n.
class Potential {
 public:
  explicit Potential(CVec g);

  int N() const noexcept { return static_cast<int>(g_.size()); }
  const CVec& g() const noexcept { return g_; }
  /// g_n for n = 1..N+1, with g_{N+1} = 1/(N+1) (the leading coefficient); 0 otherwise.
  cplx coefficient(int n) const noexcept;

  const ComplexPoly& W() const noexcept { return w_; }
  const ComplexPoly& Wp() const noexcept { return wp_; }

  /// z^2/2.
  static Potential gaussian();
  /// z^3/3 - g z.
  static Potential cubic(cplx g);

 private:
  CVec g_;
  ComplexPoly w_, wp_;
};

/// A potential together with deformation parameters t_1..t_N.
struct SpectralCurve {
  Potential potential;
  CVec t;

  /// P(z, t) = W'(z)^2 + sum_k t_k z^{N-k}.
  ComplexPoly P() const;
  /// f(z) = sum_k t_k z^{N-k}.
  ComplexPoly f() const;
  /// Total 't Hooft parameter -t_1/4.
  cplx total_s() const { return -t.front() / 4.0; }
};

SpectralCurve build_curve(const Potential& W, CVec t);

struct BranchConfiguration {
  CVec betas;   ///< odd-multiplicity cluster centroids, one entry per cluster
  CVec alphas;  ///< floor(m/2) copies of every cluster centroid
  int q = 0;
  RootSet roots;
  bool regular = true;
  /// Distance to degeneracy: smallest distance between two raw roots of P.
  double min_dist = 0.0;
};

/// Roots of P clustered at `tol`; odd clusters give branch points, and every cluster of
/// multiplicity m contributes floor(m/2) double points. Regular iff all m <= 2.
BranchConfiguration classify(const SpectralCurve& curve, double tol = 1e-7);

/// A(z) = (W'/y0)_+, the polynomial whose roots are the double points.
ComplexPoly alpha_polynomial(const Potential& W, std::span<const cplx> betas);

/// Roots of (W'/y0)_+. The cut pairing does not enter: the projection only sees the
/// expansion at infinity. Throws Degeneracy if two branch points are closer than tol.
CVec alphas_from_betas(const Potential& W, std::span<const cplx> betas, double tol = 1e-12);

struct FactorizationResidual {
  double max_abs = 0.0;
  CVec diff;                 ///< coefficient differences, ascending degree
  std::vector<int> failing;  ///< degrees whose difference exceeds the threshold
};

/// Compare P(z,t) with prod (z - alpha)^2 prod (z - beta) coefficient by coefficient.
FactorizationResidual factorization_residual(std::span<const cplx> alphas,
                                             std::span<const cplx> betas,
                                             const SpectralCurve& curve,
                                             double threshold = 1e-9);

}  // namespace spectral

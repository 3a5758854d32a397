#pragma once

#include <span>
#include <vector>

#include "spectral/common.hpp"

namespace spectral {

/// Dense polynomial with complex coefficients stored in ascending degree.
///
/// The coefficient vector is kept trimmed: the last entry is nonzero unless the
/// polynomial is identically zero, in which case the vector is empty.
class ComplexPoly {
 public:
  ComplexPoly() = default;
  explicit ComplexPoly(CVec ascending);
  ComplexPoly(std::initializer_list<cplx> ascending);

  static ComplexPoly constant(cplx c);
  static ComplexPoly monomial(int degree, cplx c = 1.0);
  /// lead * prod (z - r_i)
  static ComplexPoly from_roots(std::span<const cplx> roots, cplx lead = 1.0);

  bool is_zero() const noexcept { return c_.empty(); }
  /// Index of the last nonzero coefficient; 0 for the zero polynomial.
  int degree() const noexcept { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
  const CVec& coeffs() const noexcept { return c_; }
  /// Coefficient of z^k, zero outside the stored range.
  cplx operator[](int k) const noexcept;
  cplx lead() const noexcept { return c_.empty() ? cplx{} : c_.back(); }

  cplx operator()(cplx z) const noexcept;
  ComplexPoly derivative() const;
  /// Max-norm of the coefficient vector.
  double norm_inf() const noexcept;
  /// sum_k |a_k| |z|^k, the natural scale for rounding errors in p(z).
  double abs_eval(double r) const noexcept;

  ComplexPoly& operator+=(const ComplexPoly& o);
  ComplexPoly& operator-=(const ComplexPoly& o);
  ComplexPoly& operator*=(cplx s);
  friend ComplexPoly operator+(ComplexPoly a, const ComplexPoly& b) { return a += b; }
  friend ComplexPoly operator-(ComplexPoly a, const ComplexPoly& b) { return a -= b; }
  friend ComplexPoly operator*(ComplexPoly a, cplx s) { return a *= s; }
  friend ComplexPoly operator*(cplx s, ComplexPoly a) { return a *= s; }
  friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);

 private:
  void trim();
  CVec c_;
};

/// Roots grouped into clusters of numerically coincident values.
struct RootSet {
  CVec roots;                  ///< cluster centroids, sorted by (real, imag)
  std::vector<int> multiplicities;
  double cluster_tolerance = 0.0;

  int total_multiplicity() const;
  /// Smallest distance between two distinct centroids (infinity if fewer than two).
  double min_separation() const;
};

/// All roots of p (degree >= 1), repeated according to multiplicity.
///
/// Aberth-Ehrlich simultaneous iteration with a 500 sweep cap. Roots are
/// accepted once |p(z)| is at rounding level; a SolverFailure carries the
/// per-root residuals when the cap is hit first.
CVec find_roots(const ComplexPoly& p);

/// Relative max-norm distance between p and lead(p) * prod (z - r_i).
double reconstruction_error(const ComplexPoly& p, std::span<const cplx> roots);

/// Single-linkage clustering of roots at distance <= tol.
///
/// Throws AmbiguousClustering when a cluster's diameter exceeds tol, i.e. when
/// chaining merges values that a complete-linkage grouping would keep apart.
RootSet cluster_roots(std::span<const cplx> roots, double tol);

/// Standard discriminant (-1)^{n(n-1)/2} Res(p, p') / lead(p), computed as a
/// Sylvester determinant with partial pivoting. Degree must be in [2, 64].
cplx discriminant(const ComplexPoly& p);

/// lead^{2n-2} prod_{i<j} (r_i - r_j)^2 from explicit roots.
cplx discriminant_from_roots(std::span<const cplx> roots, cplx lead = 1.0);

/// Truncated Laurent series sum_{k=lowest}^{top} c_k z^k at infinity.
struct LaurentSeries {
  int top = 0;
  CVec c;  ///< c[i] multiplies z^{top - i}

  int lowest() const { return top - static_cast<int>(c.size()) + 1; }
  cplx coeff(int k) const;
  /// Nonnegative-power part.
  ComplexPoly plus_part() const;
};

/// Power-series coefficients of sqrt(prod_i (1 - beta_i w)) about w = 0, up to w^order.
CVec sqrt_product_series(std::span<const cplx> betas, int order);

/// Laurent expansion at infinity of a(z) * y0(z)^power with power = +1 or -1 and
/// y0 = sqrt(prod (z - beta_i)) normalised as z^q at infinity. Terms down to z^lowest.
LaurentSeries poly_times_y0(const ComplexPoly& a, std::span<const cplx> betas, int power,
                            int lowest);

/// (numer / y0)_+ : polynomial part of numer(z)/y0(z) at infinity.
ComplexPoly plus_projection(const ComplexPoly& numer, std::span<const cplx> betas);

/// (z^k y0)_+ for any integer k >= -q.
ComplexPoly y0_monomial_plus(int k, std::span<const cplx> betas);

}  // namespace spectral

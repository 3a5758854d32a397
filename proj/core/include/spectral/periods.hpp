#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "spectral/common.hpp"
#include "spectral/curve.hpp"
#include "spectral/cuts.hpp"
#include "spectral/polynomial.hpp"
#include "spectral/quadrature.hpp"

namespace spectral {

/// The physical branch y = A(z) y0(z) of sqrt(P), with y = W' + O(1/z) at infinity,
/// for a given potential and cut layout. A = (W'/y0)_+ carries the double points.
class CurveBranch {
 public:
  CurveBranch(Potential W, CutGeometry geom);

  const Potential& potential() const noexcept { return W_; }
  const CutGeometry& geometry() const noexcept { return geom_; }
  const ComplexPoly& A() const noexcept { return a_; }
  int q() const noexcept { return geom_.q(); }

  /// y off the cuts. Throws OnCut on a cut.
  cplx y(cplx z) const { return a_(z) * geom_.y0(z); }
  /// y from the left side of cut j.
  cplx y_left(int j, cplx z) const { return a_(z) * geom_.y0_left(j, z); }

  /// A^2 prod(z - beta): the P these branch points actually describe.
  ComplexPoly implied_P() const;
  /// t_k read off implied_P - W'^2 at z^{N-k}, k = 1..N.
  CVec implied_t() const;
  /// Largest coefficient of implied_P - W'^2 in degrees N..N+q-1; zero for a genuine curve.
  double consistency_defect() const;

 private:
  Potential W_;
  CutGeometry geom_;
  ComplexPoly a_;
};

struct HooftParams {
  CVec s;
  cplx total{};
  double residual = 0.0;  ///< |total + t_1/4|
};

/// Counterclockwise A-period of f(z) dz around cut j, where f is handed the point z
/// and the left limit of y0 there:  oint f dz = -2 int_{start}^{end} f(z, y0_+) dz.
/// Straight cuts use Gauss-Chebyshev, polylines tanh-sinh per segment.
cplx a_period(const CutGeometry& geom, int j, const std::function<cplx(cplx, cplx)>& f,
              const QuadratureOptions& opt = {});

/// s_j = -(1/4 pi i) oint_{A_j} y dz for the branch; residual against the implied t_1.
HooftParams hooft_params(const CurveBranch& br, const QuadratureOptions& opt = {});

/// Same, starting from a curve and its classified branch points. Throws BranchError when
/// the branch built from `config` does not square to the curve's P.
HooftParams hooft_from_curve(const SpectralCurve& curve, const BranchConfiguration& config,
                             const CutSystem& pairing, const QuadratureOptions& opt = {});

/// First-kind numerators p_j (j < q-1) with A_i(p_j dz/y0) = delta_ij, and the
/// numerators P_n, n = 0..n_max, normalised to zero A-periods.
struct AbelianBasis {
  std::vector<ComplexPoly> p;
  std::vector<ComplexPoly> P;
  Eigen::MatrixXcd period_matrix;  ///< (i, k) = A_i(z^k dz / y0)
  double condition = 1.0;
};

/// Throws Degeneracy when the period matrix is numerically singular.
AbelianBasis abelian_basis(const CutGeometry& geom, int n_max, const QuadratureOptions& opt = {});

struct DensityValue {
  cplx value{};
  bool endpoint = false;
};

/// rho(x) |dz| = y(x_+) dz / (2 pi i) at a point x of cut j.
DensityValue spectral_density(const CurveBranch& br, int j, cplx x);

/// l_j = W(beta_{2j}) - 2 g(beta_{2j}) with the log branch pinned by the reference path
/// through the cuts (see CutGeometry::check_monotone). Per-cut tanh-sinh quadrature.
CVec l_parameters(const CurveBranch& br, const QuadratureOptions& opt = {});

/// Independent evaluation of the same l_j as a limit at infinity: integrate y out to a
/// far point on both sides of the path, average, and add the Laurent tail.
CVec l_parameters_limit(const CurveBranch& br, const QuadratureOptions& opt = {});

/// oint_{B_i} dS = l_q - l_i as the integral of y over the connectors from cut i to cut q.
cplx b_period(const CurveBranch& br, int i, const QuadratureOptions& opt = {});

/// F = (1/2) int rho W + (1/2) sum s_j l_j.
cplx prepotential(const CurveBranch& br, const QuadratureOptions& opt = {});

/// -(1/2 pi i) oint z^n dS on a large circle, dS = (y + W') dz / 2.
cplx moment_at_infinity(const CurveBranch& br, int n, const QuadratureOptions& opt = {});

/// Difference between A prod(z - beta) and 2 sum g_n P_n - 2 s P_0 - 4 pi i sum_{j<q} s_j p_j.
/// The identity holds as polynomials; `at_branch_points` is the largest value of the right
/// side at any beta.
struct GeneratingDefect {
  double polynomial = 0.0;
  double at_branch_points = 0.0;
};
GeneratingDefect generating_defect(const CurveBranch& br, const AbelianBasis& basis,
                                   const HooftParams& s);

}  // namespace spectral

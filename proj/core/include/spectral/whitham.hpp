#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spectral/curve.hpp"
#include "spectral/ode.hpp"

namespace spectral {

/// d beta_i / d t_j for j = 1..q at fixed W, in deformation coordinates (t_1..t_q).
struct WhithamT {
  Eigen::MatrixXcd rhs;  ///< 2q x q
  CVec alphas;           ///< double points used in the formula
  /// For p = N - q = 1: |alpha from -N g_N - sum(beta)/2  minus  the root of (W'/y0)_+|.
  /// Zero otherwise.
  double alpha_formula_gap = 0.0;
  double min_denominator = 0.0;  ///< smallest |prod (alpha - beta_i)^2 prod (beta_i - beta_k)|
};

/// General form through the interpolant of z^{N-j} at the double points; q = N and
/// q = N - 1 take the reduced closed forms. Throws Degeneracy when two double points
/// coincide or a denominator vanishes below `tol`.
WhithamT whitham_rhs_t(const Potential& W, const CVec& betas, double tol = 1e-14);

/// t_{q+1..N} from the double points and t_1..t_q (the Vandermonde identity).
CVec reconstruct_t(const Potential& W, const CVec& alphas, const CVec& t_first);

/// t_1..t_N read off A^2 prod(z - beta) - W'^2 for A = (W'/y0)_+.
CVec implied_t(const Potential& W, const CVec& betas);

/// Smallest pairwise distance within {alpha, beta}.
double root_gap(const CVec& alphas, const CVec& betas);

struct FlowTPoint {
  double lambda = 0.0;
  CVec t;  ///< all N deformation parameters
  CVec betas;
  CVec alphas;
  double min_dist = 0.0;
};

struct FlowTResult {
  std::vector<FlowTPoint> points;
  bool catastrophe = false;
  int multiplicity_guess = 0;  ///< size of the collapsing root cluster, counting alphas twice
};

struct FlowTOptions {
  OdeOptions ode{1e-10, 1e-12, 1e-2, 1e-13, 0.05, 50000};
  double catastrophe_dist = 1e-5;  ///< relative to max(1, max|root|)
};

/// Integrate the branch points along the piecewise-linear path through `path`
/// (each entry t_1..t_q). The remaining t's follow from the configuration.
FlowTResult flow_t(const Potential& W, const CVec& betas0, const std::vector<CVec>& path,
                   const FlowTOptions& opt = {});

}  // namespace spectral

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "spectral/curve.hpp"
#include "spectral/cuts.hpp"
#include "spectral/ode.hpp"
#include "spectral/periods.hpp"

namespace spectral {

/// Branch points near the critical points of W, paired consecutively.
struct Seed {
  CVec betas;
  CutSystem pairing;
};

/// Distinct roots of W' sorted by real part, then imaginary part.
CVec critical_points(const Potential& W);

/// Cut j is seeded at critical_points(W)[assignment[j]] as a -/+ eps, eps = 1e-3 * scale
/// with scale = max(1, max |a|). Throws InvalidArgument when an index is out of range or
/// repeated; an empty assignment takes the first q critical points.
Seed classical_seed(const Potential& W, int q, std::vector<int> assignment = {});

struct NewtonOptions {
  double tol = 1e-10;          ///< on the infinity norm of the residual vector
  int max_iter = 40;
  double fd_step = 1e-7;       ///< forward-difference step, relative to the branch-point scale
  double max_condition = 1e14;  ///< SingularJacobian beyond this
  QuadratureOptions quad{1e-13, 1e-15, 1 << 14};
};

struct HooftSolution {
  CVec betas;  ///< in the order of the seed; the pairing is unchanged
  CVec t;
  BranchConfiguration config;
  double residual = 0.0;
  int iterations = 0;
  double condition = 0.0;  ///< of the last Jacobian
};

/// Residuals of the N + 2q system in the unknowns (beta, t): coefficients z^0..z^{N+q-1}
/// of A^2 prod(z - beta) - W'^2 - f(t), then s_j(beta) - s_j.
Eigen::VectorXcd hooft_residual(const Potential& W, const CVec& s, const CutSystem& pairing, const CVec& betas,
                                const CVec& t, const QuadratureOptions& quad = {1e-13, 1e-15, 1 << 14});

/// Newton on hooft_residual from `seed` (t starts at the value implied by the seed).
/// Throws SingularJacobian or SolverFailure.
HooftSolution solve_from_hooft(const Potential& W, const CVec& s, const CutSystem& pairing, const CVec& seed,
                               const NewtonOptions& opt = {});

/// Newton continuation along s(lambda) = lambda s, lambda growing geometrically from
/// a small value to 1, starting at a classical seed. The step shrinks when Newton needs
/// more than 8 iterations or fails.
HooftSolution solve_with_continuation(const Potential& W, const CVec& s, const Seed& seed,
                                      const NewtonOptions& opt = {});

/// d beta_i / d s_j from the Whitham equations: column j is
/// 4 [P_0(beta_i) + sigma 2 pi i (1 - delta_jq) p_j(beta_i)] / [A(beta_i) prod_{k!=i}(beta_i - beta_k)]
/// with sigma = +1 (see the project notes on the sign).
Eigen::MatrixXcd whitham_s_rhs(const CurveBranch& br, const AbelianBasis& basis);

struct FlowPoint {
  double lambda = 0.0;  ///< position along the s-path, 0..(number of path segments)
  CVec s;
  CVec betas;
  CVec t;
  double residual = 0.0;  ///< hooft_residual after the step (before any polishing)
  bool polished = false;
};

struct FlowResult {
  std::vector<FlowPoint> points;
  bool catastrophe = false;  ///< stopped because the right-hand side blew up
  double min_distance = 0.0;  ///< smallest |beta_i - beta_k|, |beta_i - alpha_l| at the last point
};

struct FlowOptions {
  OdeOptions ode{1e-10, 1e-12, 1e-2, 1e-10, 0.05, 20000};
  double verify_tol = 1e-8;       ///< polish with Newton when the residual exceeds this
  double catastrophe_dist = 1e-5;  ///< relative to the branch-point scale
  NewtonOptions newton{};
};

/// Integrate the Whitham equations in s along the piecewise-linear path through `path`
/// (path[0] must match the start configuration), re-deriving A and the Abelian basis
/// at every evaluation.
FlowResult flow_hooft(const Potential& W, const CutSystem& pairing, const CVec& betas0,
                      const std::vector<CVec>& path, const FlowOptions& opt = {});

}  // namespace spectral

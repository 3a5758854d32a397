#pragma once

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "spectral/epd.hpp"
#include "spectral/ode.hpp"
#include "spectral/whitham.hpp"

namespace spectral {

/// Leading data of W near a singular point (beta0, t0) with alpha = 1.
struct ScalingExpansion {
  CVec betas0, t0;
  std::vector<int> n;
  CVec A;                  ///< V_k(beta0), k = 1..q, V_k = dW/dt_k
  Eigen::MatrixXcd Akl;    ///< q x 2q, dV_k/d beta_l
  CVec B;                  ///< d^{n_l+2} W / d beta_l^{n_l+2} / (n_l+2)!
  std::vector<double> gamma;     ///< 1/(n_l+1)
  std::vector<double> exponent;  ///< predicted blow-up exponent of d beta_l/dt, -n_l/(n_l+1)
};

/// `n` as returned by classify_singular (an empty vector means all zeros).
/// Throws AmbiguousClassification if B_l vanishes where n_l >= 1.
ScalingExpansion scaling_expansion(const Potential& W, const ReducedSolution& sol, std::vector<int> n,
                                   const ContourOptions& opt = {});

struct ExponentFit {
  std::vector<double> slope;     ///< per root
  std::vector<double> residual;  ///< rms of the log-log fit
  int samples = 0;
  double window_lo = 0.0, window_hi = 0.0;
};

/// Least-squares slope of log|d beta_l| against log(dist) over the last `decades`
/// (smallest distances). Throws InvalidArgument with fewer than `min_samples` there.
ExponentFit blowup_exponent_fit(const std::vector<double>& dist, const std::vector<CVec>& dbeta,
                                double decades = 1.0, int min_samples = 20);

/// flow_t along a geometric approach t0 + d_k u, d_k = first .. last with `per_decade`
/// nodes per decade (u the unit direction towards t_start), then past t0 so the flow halts
/// at the catastrophe. Points closer than `last` are dropped. dbeta holds d beta / d lambda along -u, dist the max-norm |t - t0|.
struct ApproachSamples {
  std::vector<double> dist;
  std::vector<CVec> dbeta;
  FlowTResult flow;
};
ApproachSamples approach_samples(const Potential& W, const CVec& betas_start, const CVec& t_start, const CVec& t0,
                                 int per_decade = 30, double first = 1e-1, double last = 1e-9);

/// (beta_root(t0 + eps tau u) - beta0_root) / eps^{1/(n+1)} for every eps and tau, with u the unit
/// direction towards t_start. max_deviation is the sup over (eps, tau) of the distance to the
/// smallest-eps curve, relative to that curve's sup norm.
struct CollapseResult {
  std::vector<double> eps, tau;
  std::vector<CVec> rescaled;  ///< rescaled[e][k] for eps[e], tau[k]
  double max_deviation = 0.0;
};
CollapseResult scaling_collapse(const Potential& W, const CVec& betas_start, const CVec& t_start, const CVec& t0,
                                cplx beta0, int n, const std::vector<double>& eps,
                                const std::vector<double>& tau = {0.25, 0.5, 0.75, 1.0});

/// Samples on a real grid. For second-order problems each value holds (u, u'),
/// for first-order ones just u.
struct ODESolution {
  std::vector<double> grid;
  std::vector<CVec> values;
  double residual_norm = 0.0;  ///< max over interior nodes, three-point differencing
  bool blew_up = false;
  double blowup_x = std::numeric_limits<double>::quiet_NaN();  ///< pole estimate when blew_up
};

struct OdeGridOptions {
  OdeOptions ode{1e-13, 1e-14, 1e-3, 1e-14, std::numeric_limits<double>::infinity(), 2000000};
  double blowup_bound = 1e6;  ///< halt once some |u| exceeds this
};

/// Tritronquee data Omega ~ -sqrt(-x/6) - 1/(48 x^2) and its derivative.
std::array<double, 2> tritronquee_asymptotics(double x);

/// Omega'' = 6 Omega^2 + x from the asymptotic branch at grid.front() (<= -10).
/// Throws BranchError if the solution blows up inside the first grid interval.
ODESolution painleve1(const std::vector<double>& grid, const OdeGridOptions& opt = {});

/// Two-term large-|xi| expansion (beta, beta') of 2C beta'' = xi + (n+2) B beta^{n+1}
/// on the root of xi + (n+2) B beta^{n+1} = 0 whose linearisation oscillates.
std::array<cplx, 2> regularized_asymptotics(int n, cplx B, cplx C, double xi);

/// 2C beta'' = xi + (n+2) B beta^{n+1}. Starts from `init` (beta, beta') when given,
/// else from regularized_asymptotics at grid.front().
ODESolution integrate_scalar_regularized(int n, cplx B, cplx C, const std::vector<double>& grid,
                                         std::optional<std::array<cplx, 2>> init = std::nullopt,
                                         const OdeGridOptions& opt = {});

/// beta* = beta_scale Omega, xi = xi_scale x turns the n = 1 equation into Painleve-I.
struct PainleveMap {
  cplx beta_scale, xi_scale;
};
PainleveMap painleve_rescaling(cplx B, cplx C);

/// beta1' = D122 xi + C eta + (n+2) B2 beta2^{n+1}
/// beta2' = -D121 xi - A eta - (n+2) B1 beta1^{n+1}
struct RiccatiParams {
  int n = 1;
  cplx B1 = 1.0, B2 = 1.0, D121 = 0.0, D122 = 0.0, A = 0.0, C = 0.0, eta = 0.0;
};

/// beta_l'' = A_l1 beta1^{n+1} + A_l2 beta2^{n+1} + A_l xi, with the A's built from
/// B_lm = sum_{i,j} D_{limj}.
struct CoupledParams {
  int n = 1;
  cplx B1 = 1.0, B2 = 1.0;
  std::array<cplx, 16> D{};  ///< D_{limj} at ((l*2 + i)*2 + m)*2 + j, indices 0-based

  cplx& d(int l, int i, int m, int j) { return D[static_cast<std::size_t>(((l * 2 + i) * 2 + m) * 2 + j)]; }
};

struct CoupledCoefficients {
  Eigen::Matrix2cd A;  ///< A_lm
  Eigen::Vector2cd a;  ///< A_l (the xi coefficients)
  Eigen::Matrix2cd Bm; ///< B_lm
};

/// Throws Degeneracy when B11 B22 - B12^2 vanishes.
CoupledCoefficients coupled_coefficients(const CoupledParams& p);

/// First-order system from (beta1, beta2).
ODESolution integrate_coupled(const RiccatiParams& p, const std::vector<double>& grid, const CVec& init,
                              const OdeGridOptions& opt = {});
/// Second-order system from (beta1, beta2, beta1', beta2').
ODESolution integrate_coupled(const CoupledParams& p, const std::vector<double>& grid, const CVec& init,
                              const OdeGridOptions& opt = {});

/// Where a flow in t_1..t_q starting at a regular configuration first hits a catastrophe
/// along the segment t_start -> t_end, by bisection on "the flow reaches lambda cleanly".
struct CatastropheLocation {
  double lambda = 0.0;  ///< fraction of the segment
  double width = 0.0;   ///< final bracket width in lambda
  CVec t_head;          ///< t_1..t_q at lambda
  CVec t;               ///< all N parameters implied by the last clean configuration
  CVec betas, alphas;   ///< last clean configuration
  int flows = 0;
};

CatastropheLocation locate_catastrophe(const Potential& W, const CVec& betas0, const CVec& t_start, const CVec& t_end,
                                       double tol = 1e-11, const FlowTOptions& flow = {});

}  // namespace spectral

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "steinevt/distributions.hpp"
#include "steinevt/kernels.hpp"
#include "steinevt/report.hpp"
#include "steinevt/stein_bounds.hpp"

namespace steinevt::maxima {

enum class EVDFamily { Frechet, Weibull, Gumbel };

struct EVD {
  EVDFamily family = EVDFamily::Gumbel;
  double alpha = 1.0;  // ignored for Gumbel
};

/// Phi_alpha, Psi_alpha or Lambda.
double evd_cdf(const EVD& evd, double x);

/// A maximum-of-n scenario.  `stage` selects the approximation step:
///   normal    'a' basic Poisson, 'b' Mills ratio, 'c' Gumbel
///   cauchy    'a' basic Poisson, 'b' Frechet
///   geometric 'a' discretised Gumbel on the lattice, 'b' Gumbel, 'c' Gumbel with 1/(1-q) scaling
/// Exponential, Pareto and uniform have a single stage 'a'.  `alpha` is the Weibull index
/// used in the uniform normalisation.
struct MaxScenario {
  dist::MarginalLaw law;
  long n = 1;
  char stage = 'a';
  double alpha = 1.0;
};

/// Minimum n at which the stage's bound is stated.
long stage_min_n(const MaxScenario& sc);

/// Normal norming constants a_n, b_n.
double normal_an(long n);
double normal_bn(long n);

/// The two functions compared in the stage, both as functions of the stage's own argument
/// (y for unnormalised stages, x otherwise): P(X_(n) <= y(x)) and the target.  For geometric
/// laws the event is X_(n) < y(x).
struct StageFunctions {
  std::function<double(double)> exact;
  std::function<double(double)> target;
  std::function<double(double)> target_quantile;  // inverse of the target on (0,1)
  double domain_lo = -INFINITY, domain_hi = INFINITY;
  std::string variable;  // "x" or "y"
};
StageFunctions stage_functions(const MaxScenario& sc);

/// The bound with a per-term breakdown; meta carries n, the stage and norming constants.
BoundReport max_bound(const MaxScenario& sc);

struct OracleResult {
  double sup = 0.0;
  double argmax = 0.0;
  double last_change = 0.0;  // |sup_k - sup_{k-1}| at the final refinement
  int refinements = 0;
  std::size_t evaluations = 0;
};

/// Lower bound on sup |exact - target|.  Continuous stages use a grid laid out in target
/// quantiles, refined around the arg max until two successive refinements change the sup by
/// less than `stable_tol`.  Geometric stages are evaluated on lattice points only (stage a)
/// or at both one-sided limits of every jump (stages b, c), which is exact.
OracleResult kolmogorov_oracle(const MaxScenario& sc, Exec exec = Exec::Serial,
                               std::size_t base_grid = 4000, double stable_tol = 1e-6);

/// max_bound with the oracle attached.
BoundReport max_bound_verified(const MaxScenario& sc, Exec exec = Exec::Serial);

// ---------------------------------------------------------------------------
// Marked point processes of exceedances with i.i.d. marks, normalised to x = (y - b_n)/a_n,
// restricted to A* = [u*, right end).

/// Intensity of the normalised MPPE on A*.
stein::IntensitySpec mppe_intensity(const dist::MarginalLaw& law, long n, double u_star);

/// Limit intensity on A* (e^{-x}, alpha x^{-alpha-1}, 1, x^{-2}, or the lattice measure
/// (1-q) e^{-k*} for geometric marks).
stein::IntensitySpec mppe_limit_intensity(const dist::MarginalLaw& law, long n, double u_star);

/// P(X* >= u*), the exact success probability of the exceedance count.
double mppe_exceedance_probability(const dist::MarginalLaw& law, long n, double u_star);

/// Bound ledger for the MPPE on A*: the stated MPPE-vs-PRM(mean) term, plus the
/// PRM(mean)-vs-PRM(limit) term where the mean measure depends on n.  The oracle is the
/// integral of |mean - limit| plus the binomial-Poisson distance of the count.
BoundReport mppe_report(const dist::MarginalLaw& law, long n, double u_star);

}  // namespace steinevt::maxima

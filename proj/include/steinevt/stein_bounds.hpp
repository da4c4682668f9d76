#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "steinevt/numerics.hpp"
#include "steinevt/report.hpp"

namespace steinevt::stein {

using Pmf = std::function<double(long)>;

struct DtvResult {
  double value = 0.0;
  double error_bound = 0.0;  // half the unaccounted tail mass
};

/// 1/2 sum_{k <= M} |p(k) - q(k)|.  Throws NumericalError when the mass missing
/// beyond M exceeds tail_bound for either law.
DtvResult exact_dtv_pmf(const Pmf& p, const Pmf& q, long M, double tail_bound);

/// Smallest M > mean with exp(-mean) (e mean / M)^M <= tail.  The right-hand side is a
/// Chernoff bound on P(X >= M) both for Poisson(mean) and for any binomial with that mean.
long chernoff_index(double mean, double tail);

double binomial_pmf(long n, double p, long k);
double poisson_pmf(double lambda, long k);

double lecam_bound(const std::vector<double>& p);

struct BarbourHall {
  double lambda = 0.0;
  double bound = 0.0;   // (1 - e^{-lambda}) / lambda * sum p^2
  double simple = 0.0;  // min(1, 1/lambda) * sum p^2
};
BarbourHall barbour_hall_bound(const std::vector<double>& p);

struct LocalDependence {
  double lambda = 0.0;
  double neighbourhood_term = 0.0;
  double far_term = 0.0;
  double total() const { return neighbourhood_term + far_term; }
};
/// p_i = E I_i, ez_i = E Z_i, eiz_i = E(I_i Z_i) with Z_i the sum over the strong-dependence
/// neighbourhood, eta_i the residual dependence on everything outside it.
LocalDependence local_dependence_bound(const std::vector<double>& p, const std::vector<double>& ez,
                                       const std::vector<double>& eiz, const std::vector<double>& eta);

/// Exact dtv(Bin(n,p), Poi(np)), truncated at a Chernoff index with tail 1e-16.
DtvResult binomial_poisson_dtv(long n, double p);

/// Binomial-vs-Poisson report: the Barbour-Hall term, Le Cam and the simple form in meta,
/// oracle = exact dtv.
BoundReport binomial_poisson_report(long n, double p);

// ---------------------------------------------------------------------------
// Finite intensity measures on an interval (dim 1) or a rectangle (dim 2).

struct Atom {
  double x = 0.0, y = 0.0;
  double mass = 0.0;
};

struct IntensitySpec {
  int dim = 1;
  double lo[2] = {0.0, 0.0};
  double hi[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  std::function<double(double)> density1;
  std::function<double(double, double)> density2;  // off-diagonal part
  std::function<double(double)> diagonal;          // mass on s = t, parameterised by s
  std::vector<Atom> atoms;

  static IntensitySpec interval(double lo, double hi, std::function<double(double)> f);
  static IntensitySpec rectangle(double lo1, double hi1, double lo2, double hi2,
                                 std::function<double(double, double)> f,
                                 std::function<double(double)> diag = {});
  static IntensitySpec lattice(double lo, double hi, std::vector<Atom> atoms);

  double diag_lo() const { return std::max(lo[0], lo[1]); }
  double diag_hi() const { return std::min(hi[0], hi[1]); }
};

Quad total_mass(const IntensitySpec& s);

/// Upper bound on dtv(PRM(a), PRM(b)): integral of |a - b| over the common region,
/// with atoms compared location by location.
Quad prm_dtv_bound(const IntensitySpec& a, const IntensitySpec& b);

/// d2 between two PRMs of equal total mass lambda, given the d1 distance of the normalised
/// intensities.
double d2_two_prm_bound(double lambda_total, double d1);

}  // namespace steinevt::stein

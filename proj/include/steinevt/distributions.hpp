#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "steinevt/rng.hpp"

namespace steinevt::dist {

enum class Family { Exponential, Pareto, Uniform, StdNormal, StdCauchy, Geometric };

std::string family_name(Family f);
Family family_from_name(const std::string& s);

/// Univariate mark law.  Parameters are stored positionally:
///   Exponential(rate)         a = rate
///   Pareto(alpha, scale)      a = alpha, b = scale
///   Uniform(lo, hi)           a = lo,    b = hi
///   Geometric(q)              a = q (failure probability), support {0,1,2,...}
struct MarginalLaw {
  Family family = Family::StdNormal;
  double a = 0.0;
  double b = 0.0;

  static MarginalLaw exponential(double rate);
  static MarginalLaw pareto(double alpha, double scale);
  static MarginalLaw uniform(double lo, double hi);
  static MarginalLaw std_normal();
  static MarginalLaw std_cauchy();
  static MarginalLaw geometric(double q);
};

double cdf(const MarginalLaw& law, double x);
/// P(X > x) for continuous laws; for Geometric the lattice convention P(X >= x) = q^ceil(x), x >= 0.
double survival(const MarginalLaw& law, double x);
double quantile(const MarginalLaw& law, double u);
std::vector<double> sample(const MarginalLaw& law, std::uint64_t seed, std::size_t count);
double draw(const MarginalLaw& law, Rng& rng);

// standard normal helpers (erfc based, relative accuracy near machine precision)
double normal_pdf(double x);
double normal_cdf(double x);
double normal_sf(double x);

// ---------------------------------------------------------------------------
// Marshall-Olkin exponential (fatal shock model)

struct MOExponentialLaw {
  double nu1, nu2, nu12;
  MOExponentialLaw(double n1, double n2, double n12);
  double nu() const { return nu1 + nu2 + nu12; }
};

double mo_exponential_survival(const MOExponentialLaw& law, double y1, double y2);
std::vector<std::pair<double, double>> sample_mo_exponential(const MOExponentialLaw& law,
                                                             std::uint64_t seed, std::size_t count);

// ---------------------------------------------------------------------------
// Marshall-Olkin geometric: paired Bernoulli streams (S,T) with cell probabilities p_ij,
// X1 / X2 = number of zeros before the first one in each stream.

struct MOGeometricLaw {
  double q1, q2, p00;

  MOGeometricLaw(double q1, double q2, double p00);
  /// p10 = gamma p11, p01 = delta p11
  static MOGeometricLaw from_gamma_delta(double gamma, double delta, double p11);

  double p01() const { return q1 - p00; }
  double p10() const { return q2 - p00; }
  double p11() const { return 1.0 - q1 - q2 + p00; }
};

double mo_geometric_pmf(const MOGeometricLaw& law, long k, long l);
/// P(X1 >= k, X2 >= l) with real arguments rounded up to the lattice.
double mo_geometric_survival(const MOGeometricLaw& law, double k, double l);

/// O(1) per draw: skips the run of joint failures with one geometric variate.
std::vector<std::pair<long, long>> sample_mo_geometric(const MOGeometricLaw& law, std::uint64_t seed,
                                                       std::size_t count);
/// Literal trial-by-trial simulation of both streams.  Expected cost per draw is
/// O(1 / (1 - max(q1, q2))) Bernoulli pairs.
std::vector<std::pair<long, long>> sample_mo_geometric_trials(const MOGeometricLaw& law,
                                                              std::uint64_t seed, std::size_t count);
std::pair<long, long> draw_mo_geometric(const MOGeometricLaw& law, Rng& rng);

}  // namespace steinevt::dist

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steinevt/rng.hpp"

namespace steinevt::cop {

enum class Kind { Independence, Comonotonic, Countermonotonic, Gumbel, Clayton, MarshallOlkin };

/// Bivariate copula.  Gumbel uses theta >= 1, Clayton theta in [-1, inf) \ {0},
/// Marshall-Olkin alpha, beta in (0,1).
struct Copula {
  Kind kind = Kind::Independence;
  double theta = 1.0;
  double alpha = 0.5, beta = 0.5;

  static Copula independence() { return {}; }
  static Copula comonotonic() { return {Kind::Comonotonic}; }
  static Copula countermonotonic() { return {Kind::Countermonotonic}; }
  static Copula gumbel(double theta);
  static Copula clayton(double theta);
  static Copula marshall_olkin(double alpha, double beta);

  std::string name() const;
};

double copula_cdf(const Copula& c, double u, double v);

/// C-hat(u, v) = u + v - 1 + C(1-u, 1-v), the copula of (1-U, 1-V).
double survival_copula_cdf(const Copula& c, double u, double v);

/// dC/du (u, v): the conditional cdf of V given U = u, for the absolutely continuous families.
double conditional_cdf(const Copula& c, double u, double v);

/// C-volume of [u1,u2] x [v1,v2].
double rectangle_mass(const Copula& c, double u1, double u2, double v1, double v2);

/// Conditional inversion (u uniform, v solving dC/du = w by bisection to 1e-12) for
/// Gumbel, Clayton and independence; Marshall-Olkin through the shock construction of the
/// MO exponential law; (U,U) and (U,1-U) for the two extreme copulas.
std::vector<std::pair<double, double>> sample_copula(const Copula& c, std::uint64_t seed, std::size_t count);
std::pair<double, double> draw_copula(const Copula& c, Rng& rng);

/// Closed-form tail-dependence coefficients; the countermonotonic lower coefficient is
/// reported as undefined.
struct TailDependence {
  std::optional<double> lower, upper;
};
TailDependence tail_dependence(const Copula& c);

/// Limits C(q,q)/q (q -> 0) and C-hat(e,e)/e (e -> 0) along q_k = q0 2^-k, accelerated by
/// iterated Aitken extrapolation.  Throws NumericalError when the accelerated values fail to
/// settle.
struct TailEstimate {
  std::optional<double> lower, upper;
  double lower_change = 0.0, upper_change = 0.0;  // spread of the last accelerated values
};
TailEstimate tail_dependence_numeric(const Copula& c, double q0 = 1e-2);

/// Aitken-accelerated limit of a sequence; exposed for tests.
double aitken_limit(const std::vector<double>& seq, double* spread = nullptr);

struct FrechetReport {
  bool lower_ok = true, upper_ok = true;
  double min_lower_slack = 1.0, min_upper_slack = 1.0;  // C - W and M - C
  std::size_t points = 0;
};
FrechetReport frechet_bounds_check(const Copula& c, const std::vector<double>& grid);

/// Absolutely continuous and singular parts of the Marshall-Olkin copula at (u, v).
struct MOComponents {
  double absolutely_continuous = 0.0;
  double singular = 0.0;
};
MOComponents mo_copula_components(double alpha, double beta, double u, double v);

/// The singular part as the integral of t^{(a+b-2ab)/(ab)} over [0, min(u^a, v^b)].
double mo_singular_by_quadrature(double alpha, double beta, double u, double v);

/// Fatal-shock rates (nu1, nu2, nu12 = 1) whose survival copula is C_{alpha,beta}.
struct ShockRates {
  double nu1, nu2, nu12;
};
ShockRates mo_shock_rates(double alpha, double beta);

}  // namespace steinevt::cop

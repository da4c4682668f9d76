#pragma once

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "steinevt/distributions.hpp"
#include "steinevt/report.hpp"
#include "steinevt/rng.hpp"

namespace steinevt::mogeo {

/// MPPE of n i.i.d. Marshall-Olkin geometric pairs, normalised by
/// x* = x log(1/p00) - log n, observed in A* = [u*, inf)^2.
struct Scenario {
  dist::MOGeometricLaw law{0.5, 0.5, 0.25};
  long n = 100;
  double u_star = 0.0;
  // set when the law was built from the (gamma, delta, p11) scheme
  std::optional<double> gamma, delta, p11;

  static Scenario make(const dist::MOGeometricLaw& law, long n, double u_star);
  static Scenario from_gamma_delta(double gamma, double delta, double p11, long n, double u_star);

  double step() const;    // L = log(1/p00)
  double log_n() const;
};

/// Half-open box [s_lo, s_hi) x [t_lo, t_hi); infinite upper ends allowed.
struct Box {
  double s_lo, s_hi, t_lo, t_hi;
};

Box a_star(const Scenario& sc);

/// Lattice index k of a normalised coordinate k* = k L - log n.  Throws InvalidArgument off
/// the lattice (relative mismatch above 1e-9).
long lattice_index(const Scenario& sc, double k_star);

/// P(X1* = k*, X2* = l*) in the exponential form of the normalised coordinates.
double normalized_pmf(const Scenario& sc, double k_star, double l_star);

struct LatticeMass {
  double value = 0.0;
  double tail_bound = 0.0;  // mass left out by the truncation of the outer sum
};

/// pi*(B*) = sum of n P(X* = (k*, l*)) over lattice points in A* intersected with B*.  The outer
/// sum over k is truncated once n P(X1 >= k) <= 1e-12; inner sums over l are geometric series.
LatticeMass lattice_mean_measure(const Scenario& sc, const Box& b);

/// Off-diagonal density of the constructed intensity; defined almost everywhere (the value on
/// s = t belongs to the s < t branch and never matters for an integral).
double constructed_intensity(const Scenario& sc, double s, double t);
/// Density on the diagonal, parameterised by the s coordinate.
double constructed_diagonal(const Scenario& sc, double s);

/// lambda*(B*) over B* intersected with A* and [-log n, inf)^2: adaptive quadrature of the
/// off-diagonal density split along s = t, plus the diagonal line integral.
double constructed_measure(const Scenario& sc, const Box& b);

/// Cellwise comparison of constructed_measure and lattice_mean_measure on lattice squares
/// [k*, k*+L) x [l*, l*+L); cells are integrated in parallel.
struct CellCheck {
  long k = 0, l = 0;
  double lattice = 0.0, constructed = 0.0, rel_diff = 0.0;
};
std::vector<CellCheck> rectangle_consistency(const Scenario& sc, const std::vector<std::pair<long, long>>& cells);

/// Limit intensity of the (gamma, delta) scheme (independent of n) and its diagonal part.
double limit_intensity_gd(double gamma, double delta, double s, double t);
double limit_diagonal_gd(double gamma, double delta, double s);

/// The five inequalities relating the exact exponents to their (gamma, delta) limits.  For
/// each, lower_slack = value - 0 (entries i-iv) and upper_slack = bound - value.
struct ExponentReport {
  std::array<double, 5> value{}, bound{}, lower_slack{}, upper_slack{};
  std::array<bool, 5> holds{};
  bool all() const;
};
ExponentReport exponent_inequalities(double gamma, double delta, double p11);

/// Bottom-left corner of the largest union of lattice squares inside A* = [u*, inf)^2.
double a_tilde_corner(const Scenario& sc);

/// Three-stage ledger (lattice Poisson, lattice to continuous, continuous to (gamma, delta)
/// limit) with the combined closed-form total; needs a scenario built from (gamma, delta, p11).
BoundReport bound_ledger(const Scenario& sc);

/// Number of the n normalised pairs that fall in A*, drawn pair by pair.
long simulate_count(const Scenario& sc, Rng& rng);

}  // namespace steinevt::mogeo

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "steinevt/report.hpp"

// Upper-tail calculus for bivariate Archimedean copulas written through the reflected generator
// phibar(r) = phi(1 - r) = w(r)^theta with w(r) = r h(r).
//
// Supported families (numbering of Nelsen's catalogue):
//   2   phibar = r^theta
//   4   phibar = (-log(1-r))^theta                   (Gumbel)
//   6   phibar = -log(1 - r^theta)
//   12  phibar = (r/(1-r))^theta
//   14  phibar = ((1-r)^(-1/theta) - 1)^theta
//   15  phibar = (1 - (1-r)^(1/theta))^theta
//   21  phibar = 1 - (1 - r^theta)^(1/theta)
namespace steinevt::arch {

struct Family {
  int id = 4;
  double theta = 2.0;

  /// Validates the id and theta >= 1 (theta = 1 is kept for the independence limit).
  static Family make(int id, double theta);
  std::string name() const { return "family-" + std::to_string(id); }
};

const std::vector<int>& family_ids();

double phibar(const Family& f, double r);
/// Pseudo-inverse 1 - phi^[-1](x): equals 1 once x exceeds phibar(1).
double phibar_inv(const Family& f, double x);

struct Derivatives {
  double h = 0.0, dh = 0.0;           // h, h'
  double w = 0.0, dw = 0.0, d2w = 0.0; // w, w', w''
};
/// Closed forms for r >= 0, switching to power series near 0 where the closed forms cancel.
Derivatives derivatives(const Family& f, double r);

double h0(const Family& f);

/// Numeric limit of r phibar'(r) / phibar(r) as r -> 0 along r_k = 0.1 * 2^-k, with phibar'
/// from fourth-order central differences and Aitken acceleration.  Throws NumericalError if the
/// accelerated tail of the sequence spreads by more than 1e-6.
double theta_tilde(const Family& f, double* spread = nullptr);

struct TailConstants {
  bool exact_family = false;  // family 2: the limit intensity is exact, no constant needed
  double h0 = 0.0;
  double r0 = 0.0;            // rounded down to three decimals
  double r0_raw = 0.0;        // bisection value before rounding
  double H = 0.0, W = 0.0;    // max h' and max w'' over [0, r0]
  double kappa = 0.0, K = 0.0;
};

/// K(theta, h0, r0, H, W) from the constant's closed formula.
double k_constant(double theta, double h0, double r0, double H, double W, double* kappa = nullptr);

/// r0 is the largest r with w' <= 4 h0/3 on [0, r] (bisection, each candidate checked on a
/// 10^4-point grid), unless an override is supplied.  H and W are grid maxima over [0, r0].
TailConstants tail_constants(const Family& f, std::optional<double> r0_override = std::nullopt);

/// Density of the MPPE of joint exceedances at (s, t) in (0, n]^2.
double exact_intensity(const Family& f, double n, double s, double t);

/// (theta-1) (st)^(theta-1) (s^theta + t^theta)^(1/theta - 2).
double limit_intensity(double theta, double s, double t);

/// s + t - (s^theta + t^theta)^(1/theta): mass of the limit intensity on (0,s] x (0,t].
double limit_box_mass(double theta, double s, double t);

struct Exceedances {
  double exact = 0.0, limit = 0.0, abs_diff = 0.0;
};
Exceedances expected_exceedances(const Family& f, double n, double s, double t);

/// Thresholds s_n, t_n as fixed numbers or as sqrt(log n)/2 each.
struct ThresholdRule {
  bool sqrt_log = false;
  double s = 1.0, t = 1.0;
  double s_at(long n) const;
  double t_at(long n) const;
};

/// Smallest n >= 2 from which on s_n/n, t_n/n <= 3 r0/8 holds (scans up to 10^8).
long minimum_feasible_n(const ThresholdRule& rule, double r0);

/// min(s/n, t/n) + K (s+t)^2/n.  Throws GateError naming the minimum n when the gate fails.
BoundReport total_bound(const Family& f, long n, const ThresholdRule& rule, const TailConstants& tc);
BoundReport total_bound(const Family& f, long n, const ThresholdRule& rule);

struct TableRow {
  int id = 0;
  double theta = 0.0;
  TailConstants computed;
  // published values; absent for family 2
  std::optional<double> ref_r0, ref_H, ref_W, ref_K;
  bool k_within_tolerance = false;
};

/// All families except 2 at the given theta (1.5 or 3 carry reference values), computed in
/// parallel over families.
std::vector<TableRow> constants_table(double theta);
void write_table_csv(std::ostream& os, const std::vector<TableRow>& rows);

}  // namespace steinevt::arch

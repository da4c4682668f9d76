#include "steinevt/stein_bounds.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/poisson.hpp>

namespace steinevt::stein {

DtvResult exact_dtv_pmf(const Pmf& p, const Pmf& q, long M, double tail_bound) {
  if (M < 0) throw InvalidArgument("truncation index must be nonnegative");
  long double acc = 0, mp = 0, mq = 0;
  for (long k = 0; k <= M; ++k) {
    double a = p(k), b = q(k);
    acc += std::fabs(static_cast<long double>(a) - b);
    mp += a;
    mq += b;
  }
  double tail_p = std::max(0.0L, 1.0L - mp), tail_q = std::max(0.0L, 1.0L - mq);
  if (tail_p > tail_bound + 1e-15 || tail_q > tail_bound + 1e-15)
    throw NumericalError("pmf tail beyond truncation index exceeds the requested bound");
  return {static_cast<double>(acc / 2), 0.5 * (tail_p + tail_q)};
}

long chernoff_index(double mean, double tail) {
  if (mean < 0 || !(tail > 0)) throw InvalidArgument("chernoff_index needs mean >= 0, tail > 0");
  if (mean == 0) return 0;
  const double lt = std::log(tail);
  long M = static_cast<long>(std::floor(mean)) + 1;
  while (-mean + M * (1.0 + std::log(mean) - std::log(static_cast<double>(M))) > lt) ++M;
  return M;
}

double binomial_pmf(long n, double p, long k) {
  if (k < 0 || k > n) return 0.0;
  return boost::math::pdf(boost::math::binomial_distribution<double>(static_cast<double>(n), p),
                          static_cast<double>(k));
}

double poisson_pmf(double lambda, long k) {
  if (k < 0) return 0.0;
  if (lambda == 0) return k == 0 ? 1.0 : 0.0;
  return boost::math::pdf(boost::math::poisson_distribution<double>(lambda), static_cast<double>(k));
}

static void check_probs(const std::vector<double>& p) {
  for (double x : p)
    if (!(x > 0 && x < 1)) throw InvalidArgument("each p_i must lie in (0,1)");
}

double lecam_bound(const std::vector<double>& p) {
  check_probs(p);
  double s = 0;
  for (double x : p) s += x * x;
  return s;
}

BarbourHall barbour_hall_bound(const std::vector<double>& p) {
  if (p.empty()) throw InvalidArgument("Barbour-Hall bound needs at least one indicator");
  check_probs(p);
  BarbourHall r;
  double s2 = 0;
  for (double x : p) {
    r.lambda += x;
    s2 += x * x;
  }
  r.bound = -std::expm1(-r.lambda) / r.lambda * s2;
  r.simple = std::min(1.0, 1.0 / r.lambda) * s2;
  return r;
}

LocalDependence local_dependence_bound(const std::vector<double>& p, const std::vector<double>& ez,
                                       const std::vector<double>& eiz, const std::vector<double>& eta) {
  const std::size_t n = p.size();
  if (ez.size() != n || eiz.size() != n || eta.size() != n)
    throw InvalidArgument("local dependence inputs must have equal length");
  LocalDependence r;
  double near = 0, far = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] < 0 || ez[i] < 0 || eiz[i] < 0 || eta[i] < 0)
      throw InvalidArgument("local dependence inputs must be nonnegative");
    r.lambda += p[i];
    near += p[i] * p[i] + p[i] * ez[i] + eiz[i];
    far += eta[i];
  }
  if (r.lambda <= 0) throw InvalidArgument("local dependence bound needs lambda > 0");
  r.neighbourhood_term = near * std::min(1.0, 1.0 / r.lambda);
  r.far_term = far * std::min(1.0, std::sqrt(2.0 / (std::exp(1.0) * r.lambda)));
  return r;
}

DtvResult binomial_poisson_dtv(long n, double p) {
  if (n < 1 || !(p >= 0 && p <= 1)) throw InvalidArgument("binomial needs n >= 1 and p in [0,1]");
  const double lambda = n * p;
  // the Chernoff bound covers the binomial tail as well, so one index serves both laws
  const long M = std::max(chernoff_index(lambda, 1e-16), 1L);
  return exact_dtv_pmf([&](long k) { return binomial_pmf(n, p, k); },
                       [&](long k) { return poisson_pmf(lambda, k); }, M, 1e-13);
}

BoundReport binomial_poisson_report(long n, double p) {
  if (n < 1) throw InvalidArgument("binomial size must be >= 1");
  std::vector<double> ps(static_cast<std::size_t>(n), p);
  BoundReport r;
  r.name = "binomial-poisson";
  const double lambda = n * p;
  auto bh = barbour_hall_bound(ps);
  r.terms.push_back({"barbour-hall", "(1-e^-lambda)/lambda sum p^2", bh.bound, "Barbour-Hall bound"});
  r.total = bh.bound;
  r.meta["n"] = static_cast<double>(n);
  r.meta["p"] = p;
  r.meta["lambda"] = lambda;
  r.meta["lecam"] = lecam_bound(ps);
  r.meta["barbour_hall_simple"] = bh.simple;
  auto d = binomial_poisson_dtv(n, p);
  r.oracle = d.value;
  r.meta["oracle_error_bound"] = d.error_bound;
  return r;
}

// ---------------------------------------------------------------------------

IntensitySpec IntensitySpec::interval(double lo, double hi, std::function<double(double)> f) {
  if (!(hi > lo)) throw InvalidArgument("interval needs lo < hi");
  IntensitySpec s;
  s.dim = 1;
  s.lo[0] = lo;
  s.hi[0] = hi;
  s.density1 = std::move(f);
  return s;
}

IntensitySpec IntensitySpec::rectangle(double lo1, double hi1, double lo2, double hi2,
                                       std::function<double(double, double)> f,
                                       std::function<double(double)> diag) {
  if (!(hi1 > lo1) || !(hi2 > lo2)) throw InvalidArgument("rectangle needs lo < hi per axis");
  IntensitySpec s;
  s.dim = 2;
  s.lo[0] = lo1;
  s.hi[0] = hi1;
  s.lo[1] = lo2;
  s.hi[1] = hi2;
  s.density2 = std::move(f);
  s.diagonal = std::move(diag);
  return s;
}

IntensitySpec IntensitySpec::lattice(double lo, double hi, std::vector<Atom> atoms) {
  IntensitySpec s;
  s.dim = 1;
  s.lo[0] = lo;
  s.hi[0] = hi;
  s.atoms = std::move(atoms);
  return s;
}

Quad total_mass(const IntensitySpec& s) {
  Quad q;
  if (s.dim == 1) {
    if (s.density1) q = integrate(s.density1, s.lo[0], s.hi[0]);
  } else {
    if (s.density2) q = integrate2(s.density2, s.lo[0], s.hi[0], s.lo[1], s.hi[1], true);
    if (s.diagonal && s.diag_hi() > s.diag_lo()) {
      Quad d = integrate(s.diagonal, s.diag_lo(), s.diag_hi());
      q.value += d.value;
      q.error += d.error;
    }
  }
  for (const auto& a : s.atoms) q.value += a.mass;
  if (!std::isfinite(q.value)) throw InvalidArgument("intensity has infinite total mass");
  return q;
}

static bool same_end(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a));
}

Quad prm_dtv_bound(const IntensitySpec& a, const IntensitySpec& b) {
  bool same = a.dim == b.dim && same_end(a.lo[0], b.lo[0]) && same_end(a.hi[0], b.hi[0]);
  if (a.dim == 2) same = same && same_end(a.lo[1], b.lo[1]) && same_end(a.hi[1], b.hi[1]);
  if (!same) throw InvalidArgument("intensity regions differ");

  Quad out;
  if (a.dim == 1) {
    if (a.density1 || b.density1) {
      auto f = [&](double x) {
        double fa = a.density1 ? a.density1(x) : 0.0, fb = b.density1 ? b.density1(x) : 0.0;
        return std::fabs(fa - fb);
      };
      out = integrate(f, a.lo[0], a.hi[0]);
    }
  } else {
    if (a.density2 || b.density2) {
      auto f = [&](double s, double t) {
        double fa = a.density2 ? a.density2(s, t) : 0.0, fb = b.density2 ? b.density2(s, t) : 0.0;
        return std::fabs(fa - fb);
      };
      out = integrate2(f, a.lo[0], a.hi[0], a.lo[1], a.hi[1], true);
    }
    if ((a.diagonal || b.diagonal) && a.diag_hi() > a.diag_lo()) {
      auto g = [&](double s) {
        double ga = a.diagonal ? a.diagonal(s) : 0.0, gb = b.diagonal ? b.diagonal(s) : 0.0;
        return std::fabs(ga - gb);
      };
      Quad d = integrate(g, a.diag_lo(), a.diag_hi());
      out.value += d.value;
      out.error += d.error;
    }
  }

  std::vector<Atom> rest = b.atoms;
  for (const auto& x : a.atoms) {
    auto it = std::find_if(rest.begin(), rest.end(), [&](const Atom& y) {
      return same_end(x.x, y.x) && same_end(x.y, y.y);
    });
    if (it == rest.end()) {
      out.value += x.mass;
    } else {
      out.value += std::fabs(x.mass - it->mass);
      rest.erase(it);
    }
  }
  for (const auto& y : rest) out.value += y.mass;

  if (!std::isfinite(out.value)) throw NumericalError("quadrature of intensity difference diverged");
  return out;
}

double d2_two_prm_bound(double lambda_total, double d1) {
  if (!(lambda_total > 0)) throw InvalidArgument("total mass must be positive");
  if (!(d1 >= 0 && d1 <= 1)) throw InvalidArgument("d1 must lie in [0,1]");
  const double e = std::exp(-lambda_total);
  return (1.0 - e) * (2.0 - e) * d1;
}

}  // namespace steinevt::stein

#include "steinevt/copulas.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "steinevt/numerics.hpp"
#include "steinevt/report.hpp"

namespace steinevt::cop {

namespace {

void check_unit(double u, double v) {
  if (!(u >= 0 && u <= 1 && v >= 0 && v <= 1)) throw InvalidArgument("copula arguments must lie in [0,1]");
}

double gumbel_cdf(double theta, double u, double v) {
  if (u == 0 || v == 0) return 0.0;
  if (u == 1) return v;
  if (v == 1) return u;
  const double a = std::pow(-std::log(u), theta) + std::pow(-std::log(v), theta);
  return std::exp(-std::pow(a, 1.0 / theta));
}

double clayton_cdf(double theta, double u, double v) {
  if (u == 0 || v == 0) return 0.0;
  if (u == 1) return v;
  if (v == 1) return u;
  const double s = std::pow(u, -theta) + std::pow(v, -theta) - 1.0;
  if (s <= 0) return 0.0;
  return std::pow(s, -1.0 / theta);
}

}  // namespace

Copula Copula::gumbel(double theta) {
  if (!(theta >= 1)) throw InvalidArgument("Gumbel copula needs theta >= 1");
  Copula c{Kind::Gumbel};
  c.theta = theta;
  return c;
}

Copula Copula::clayton(double theta) {
  if (!(theta >= -1) || theta == 0) throw InvalidArgument("Clayton copula needs theta in [-1, inf) without 0");
  Copula c{Kind::Clayton};
  c.theta = theta;
  return c;
}

Copula Copula::marshall_olkin(double alpha, double beta) {
  if (!(alpha > 0 && alpha < 1 && beta > 0 && beta < 1))
    throw InvalidArgument("Marshall-Olkin copula needs alpha, beta in (0,1)");
  Copula c{Kind::MarshallOlkin};
  c.alpha = alpha;
  c.beta = beta;
  return c;
}

std::string Copula::name() const {
  switch (kind) {
    case Kind::Independence: return "independence";
    case Kind::Comonotonic: return "comonotonic";
    case Kind::Countermonotonic: return "countermonotonic";
    case Kind::Gumbel: return "gumbel";
    case Kind::Clayton: return "clayton";
    case Kind::MarshallOlkin: return "marshall-olkin";
  }
  return "?";
}

double copula_cdf(const Copula& c, double u, double v) {
  check_unit(u, v);
  switch (c.kind) {
    case Kind::Independence: return u * v;
    case Kind::Comonotonic: return std::min(u, v);
    case Kind::Countermonotonic: return std::max(u + v - 1.0, 0.0);
    case Kind::Gumbel: return gumbel_cdf(c.theta, u, v);
    case Kind::Clayton: return clayton_cdf(c.theta, u, v);
    case Kind::MarshallOlkin:
      return std::min(std::pow(u, 1.0 - c.alpha) * v, u * std::pow(v, 1.0 - c.beta));
  }
  return 0.0;
}

double survival_copula_cdf(const Copula& c, double u, double v) {
  check_unit(u, v);
  return u + v - 1.0 + copula_cdf(c, 1.0 - u, 1.0 - v);
}

double conditional_cdf(const Copula& c, double u, double v) {
  check_unit(u, v);
  if (v == 0) return 0.0;
  if (v == 1) return 1.0;
  switch (c.kind) {
    case Kind::Independence: return v;
    case Kind::Gumbel: {
      if (u == 0) return c.theta > 1 ? 0.0 : v;
      if (u == 1) return c.theta > 1 ? 1.0 : v;
      const double x = -std::log(u), y = -std::log(v), th = c.theta;
      const double a = std::pow(x, th) + std::pow(y, th);
      const double cval = std::exp(-std::pow(a, 1.0 / th));
      return cval * std::pow(a, 1.0 / th - 1.0) * std::pow(x, th - 1.0) / u;
    }
    case Kind::Clayton: {
      if (u == 0) return c.theta > 0 ? 1.0 : 0.0;
      const double th = c.theta;
      const double s = std::pow(u, -th) + std::pow(v, -th) - 1.0;
      if (s <= 0) return 0.0;
      return std::pow(u, -th - 1.0) * std::pow(s, -1.0 / th - 1.0);
    }
    default: throw InvalidArgument("conditional cdf not available for " + c.name());
  }
}

double rectangle_mass(const Copula& c, double u1, double u2, double v1, double v2) {
  return copula_cdf(c, u2, v2) - copula_cdf(c, u1, v2) - copula_cdf(c, u2, v1) + copula_cdf(c, u1, v1);
}

ShockRates mo_shock_rates(double alpha, double beta) {
  if (!(alpha > 0 && alpha < 1 && beta > 0 && beta < 1)) throw InvalidArgument("alpha, beta must lie in (0,1)");
  return {1.0 / alpha - 1.0, 1.0 / beta - 1.0, 1.0};
}

std::pair<double, double> draw_copula(const Copula& c, Rng& rng) {
  const double u = uniform_open(rng);
  switch (c.kind) {
    case Kind::Comonotonic: return {u, u};
    case Kind::Countermonotonic: return {u, 1.0 - u};
    case Kind::MarshallOlkin: {
      // survival copula of the fatal shock model: U = exp(-X1/alpha), V = exp(-X2/beta)
      const ShockRates r = mo_shock_rates(c.alpha, c.beta);
      const double e1 = -std::log(u) / r.nu1;
      const double e2 = -std::log(uniform_open(rng)) / r.nu2;
      const double e12 = -std::log(uniform_open(rng)) / r.nu12;
      return {std::exp(-std::min(e1, e12) / c.alpha), std::exp(-std::min(e2, e12) / c.beta)};
    }
    default: {
      const double w = uniform_open(rng);
      auto g = [&](double v) { return conditional_cdf(c, u, v) - w; };
      boost::math::tools::eps_tolerance<double> tol(40);  // 2^-40 ~ 1e-12
      auto r = boost::math::tools::bisect(g, 0.0, 1.0, tol);
      return {u, 0.5 * (r.first + r.second)};
    }
  }
}

std::vector<std::pair<double, double>> sample_copula(const Copula& c, std::uint64_t seed, std::size_t count) {
  Rng rng = make_rng(seed);
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(draw_copula(c, rng));
  return out;
}

TailDependence tail_dependence(const Copula& c) {
  switch (c.kind) {
    case Kind::Independence: return {0.0, 0.0};
    case Kind::Comonotonic: return {1.0, 1.0};
    case Kind::Countermonotonic: return {std::nullopt, 0.0};
    case Kind::Gumbel: return {0.0, 2.0 - std::pow(2.0, 1.0 / c.theta)};
    case Kind::Clayton: return {c.theta > 0 ? std::pow(2.0, -1.0 / c.theta) : 0.0, 0.0};
    case Kind::MarshallOlkin: return {0.0, std::min(c.alpha, c.beta)};
  }
  return {};
}

namespace {

std::vector<double> aitken_step(const std::vector<double>& x) {
  std::vector<double> y;
  for (std::size_t k = 0; k + 2 < x.size(); ++k) {
    const double d1 = x[k + 2] - x[k + 1], d2 = x[k + 2] - 2.0 * x[k + 1] + x[k];
    // a flat or noise-level second difference means the sequence has already settled
    if (std::fabs(d2) <= 1e-13 * std::max(1.0, std::fabs(x[k + 2]))) y.push_back(x[k + 2]);
    else y.push_back(x[k + 2] - d1 * d1 / d2);
  }
  return y;
}

double tail_spread(const std::vector<double>& x) {
  const std::size_t m = std::min<std::size_t>(x.size(), 3);
  double lo = x.back(), hi = x.back();
  for (std::size_t k = x.size() - m; k < x.size(); ++k) lo = std::min(lo, x[k]), hi = std::max(hi, x[k]);
  return hi - lo;
}

}  // namespace

double aitken_limit(const std::vector<double>& seq, double* spread) {
  if (seq.empty()) throw InvalidArgument("empty sequence");
  std::vector<double> best = seq;
  double best_spread = tail_spread(seq);
  std::vector<double> x = seq;
  for (int level = 0; level < 2 && x.size() >= 5; ++level) {
    x = aitken_step(x);
    const double s = tail_spread(x);
    if (s < best_spread) best = x, best_spread = s;
  }
  if (spread) *spread = best_spread;
  return best.back();
}

TailEstimate tail_dependence_numeric(const Copula& c, double q0) {
  if (!(q0 > 0 && q0 < 0.5)) throw InvalidArgument("starting level must lie in (0, 1/2)");
  TailEstimate out;
  std::vector<double> lower, upper;
  // the lower ratio has no cancellation and can go deep; the upper ratio 1 - 2q + C(q,q)
  // loses about log10(1/e) digits, so it stops near e = 1e-6
  for (int k = 0; k <= 30; ++k) {
    const double q = q0 * std::ldexp(1.0, -k);
    lower.push_back(copula_cdf(c, q, q) / q);
    if (k <= 13) upper.push_back(survival_copula_cdf(c, q, q) / q);
  }
  const TailDependence closed = tail_dependence(c);
  if (closed.lower) out.lower = std::clamp(aitken_limit(lower, &out.lower_change), 0.0, 1.0);
  out.upper = std::clamp(aitken_limit(upper, &out.upper_change), 0.0, 1.0);
  if (out.lower_change > 1e-3 || out.upper_change > 1e-3)
    throw NumericalError("tail-dependence sequence did not settle");
  return out;
}

FrechetReport frechet_bounds_check(const Copula& c, const std::vector<double>& grid) {
  FrechetReport r;
  for (double u : grid)
    for (double v : grid) {
      const double cv = copula_cdf(c, u, v);
      const double lo = cv - std::max(u + v - 1.0, 0.0), hi = std::min(u, v) - cv;
      r.min_lower_slack = std::min(r.min_lower_slack, lo);
      r.min_upper_slack = std::min(r.min_upper_slack, hi);
      ++r.points;
    }
  r.lower_ok = r.min_lower_slack >= -1e-15;
  r.upper_ok = r.min_upper_slack >= -1e-15;
  return r;
}

MOComponents mo_copula_components(double alpha, double beta, double u, double v) {
  const Copula c = Copula::marshall_olkin(alpha, beta);
  const double total = copula_cdf(c, u, v);
  const double k = alpha * beta / (alpha + beta - alpha * beta);
  const double m = std::min(std::pow(u, alpha), std::pow(v, beta));
  const double s = m <= 0 ? 0.0 : k * std::pow(m, 1.0 / k);
  return {total - s, s};
}

double mo_singular_by_quadrature(double alpha, double beta, double u, double v) {
  check_unit(u, v);
  const double e = (alpha + beta - 2.0 * alpha * beta) / (alpha * beta);
  const double m = std::min(std::pow(u, alpha), std::pow(v, beta));
  return integrate([e](double t) { return std::pow(t, e); }, 0.0, m, 1e-13).value;
}

}  // namespace steinevt::cop

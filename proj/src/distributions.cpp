#include "steinevt/distributions.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "steinevt/report.hpp"

namespace steinevt::dist {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw InvalidArgument(msg);
}

double geometric_draw(double q, Rng& rng) {
  // zeros before the first one: floor(log U / log q)
  return std::floor(std::log(uniform_open(rng)) / std::log(q));
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::Exponential: return "exponential";
    case Family::Pareto: return "pareto";
    case Family::Uniform: return "uniform";
    case Family::StdNormal: return "normal";
    case Family::StdCauchy: return "cauchy";
    case Family::Geometric: return "geometric";
  }
  return "?";
}

Family family_from_name(const std::string& s) {
  for (Family f : {Family::Exponential, Family::Pareto, Family::Uniform, Family::StdNormal,
                   Family::StdCauchy, Family::Geometric})
    if (family_name(f) == s) return f;
  throw InvalidArgument("unknown law: " + s);
}

MarginalLaw MarginalLaw::exponential(double rate) {
  require(rate > 0, "exponential rate must be positive");
  return {Family::Exponential, rate, 0.0};
}
MarginalLaw MarginalLaw::pareto(double alpha, double scale) {
  require(alpha > 0 && scale > 0, "pareto needs alpha > 0 and scale > 0");
  return {Family::Pareto, alpha, scale};
}
MarginalLaw MarginalLaw::uniform(double lo, double hi) {
  require(lo < hi, "uniform needs lo < hi");
  return {Family::Uniform, lo, hi};
}
MarginalLaw MarginalLaw::std_normal() { return {Family::StdNormal, 0.0, 0.0}; }
MarginalLaw MarginalLaw::std_cauchy() { return {Family::StdCauchy, 0.0, 0.0}; }
MarginalLaw MarginalLaw::geometric(double q) {
  require(q > 0 && q < 1, "geometric failure probability must lie in (0,1)");
  return {Family::Geometric, q, 0.0};
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double cdf(const MarginalLaw& law, double x) {
  if (std::isnan(x)) throw InvalidArgument("cdf at NaN");
  switch (law.family) {
    case Family::Exponential: return x <= 0 ? 0.0 : -std::expm1(-law.a * x);
    case Family::Pareto: return x <= law.b ? 0.0 : 1.0 - std::pow(law.b / x, law.a);
    case Family::Uniform:
      if (x <= law.a) return 0.0;
      if (x >= law.b) return 1.0;
      return (x - law.a) / (law.b - law.a);
    case Family::StdNormal: return normal_cdf(x);
    case Family::StdCauchy: return std::atan(x) / std::numbers::pi + 0.5;
    case Family::Geometric:
      if (x < 0) return 0.0;
      if (std::isinf(x)) return 1.0;
      return 1.0 - std::pow(law.a, std::floor(x) + 1.0);
  }
  return 0.0;
}

double survival(const MarginalLaw& law, double x) {
  if (std::isnan(x)) throw InvalidArgument("survival at NaN");
  switch (law.family) {
    case Family::Exponential: return x <= 0 ? 1.0 : std::exp(-law.a * x);
    case Family::Pareto: return x <= law.b ? 1.0 : std::pow(law.b / x, law.a);
    case Family::Uniform:
      if (x <= law.a) return 1.0;
      if (x >= law.b) return 0.0;
      return (law.b - x) / (law.b - law.a);
    case Family::StdNormal: return normal_sf(x);
    case Family::StdCauchy:
      return x > 0 ? std::atan(1.0 / x) / std::numbers::pi : 0.5 - std::atan(x) / std::numbers::pi;
    case Family::Geometric:
      if (x <= 0) return 1.0;
      if (std::isinf(x)) return 0.0;
      return std::pow(law.a, std::ceil(x));
  }
  return 0.0;
}

double quantile(const MarginalLaw& law, double u) {
  if (!(u >= 0 && u <= 1)) throw InvalidArgument("quantile level outside [0,1]");
  switch (law.family) {
    case Family::Exponential: return -std::log1p(-u) / law.a;
    case Family::Pareto: return law.b * std::pow(1.0 - u, -1.0 / law.a);
    case Family::Uniform: return law.a + (law.b - law.a) * u;
    case Family::StdNormal:
      if (u == 0) return -INFINITY;
      if (u == 1) return INFINITY;
      return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
    case Family::StdCauchy: return std::tan(std::numbers::pi * (u - 0.5));
    case Family::Geometric: {
      if (u == 1) return INFINITY;
      double k = std::ceil(std::log1p(-u) / std::log(law.a)) - 1.0;
      return k < 0 ? 0.0 : k;
    }
  }
  return 0.0;
}

double draw(const MarginalLaw& law, Rng& rng) {
  if (law.family == Family::StdNormal) {
    double u1 = uniform_open(rng), u2 = uniform_open(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  return quantile(law, uniform_open(rng));
}

std::vector<double> sample(const MarginalLaw& law, std::uint64_t seed, std::size_t count) {
  Rng rng = make_rng(seed);
  std::vector<double> out;
  out.reserve(count);
  if (law.family == Family::StdNormal) {
    // Box-Muller, both coordinates used
    while (out.size() < count) {
      double u1 = uniform_open(rng), u2 = uniform_open(rng);
      double r = std::sqrt(-2.0 * std::log(u1));
      out.push_back(r * std::cos(2.0 * std::numbers::pi * u2));
      if (out.size() < count) out.push_back(r * std::sin(2.0 * std::numbers::pi * u2));
    }
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) out.push_back(quantile(law, uniform_open(rng)));
  return out;
}

// ---------------------------------------------------------------------------

MOExponentialLaw::MOExponentialLaw(double n1, double n2, double n12) : nu1(n1), nu2(n2), nu12(n12) {
  require(n1 > 0 && n2 > 0 && n12 > 0, "Marshall-Olkin rates must be strictly positive");
}

double mo_exponential_survival(const MOExponentialLaw& law, double y1, double y2) {
  require(y1 >= 0 && y2 >= 0, "Marshall-Olkin survival needs nonnegative coordinates");
  return std::exp(-law.nu1 * y1 - law.nu2 * y2 - law.nu12 * std::max(y1, y2));
}

std::vector<std::pair<double, double>> sample_mo_exponential(const MOExponentialLaw& law,
                                                             std::uint64_t seed, std::size_t count) {
  Rng rng = make_rng(seed);
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double e1 = -std::log(uniform_open(rng)) / law.nu1;
    double e2 = -std::log(uniform_open(rng)) / law.nu2;
    double e12 = -std::log(uniform_open(rng)) / law.nu12;
    out.emplace_back(std::min(e1, e12), std::min(e2, e12));
  }
  return out;
}

// ---------------------------------------------------------------------------

MOGeometricLaw::MOGeometricLaw(double q1_, double q2_, double p00_) : q1(q1_), q2(q2_), p00(p00_) {
  require(q1 > 0 && q1 < 1 && q2 > 0 && q2 < 1 && p00 > 0 && p00 < 1,
          "q1, q2, p00 must lie in (0,1)");
  const double tol = 1e-15;
  require(p00 >= q1 * q2 - tol, "Marshall-Olkin geometric needs p00 >= q1 q2");
  require(p00 <= std::min(q1, q2) + tol, "Marshall-Olkin geometric needs p00 <= min(q1, q2)");
  require(1.0 - q1 - q2 + p00 >= -tol, "cell probability p11 would be negative");
}

MOGeometricLaw MOGeometricLaw::from_gamma_delta(double gamma, double delta, double p11) {
  require(gamma > 0 && delta > 0, "gamma and delta must be positive");
  require(p11 > 0 && p11 < 1, "p11 must lie in (0,1)");
  require((1.0 + gamma + delta) * p11 < 1.0, "need (1 + gamma + delta) p11 < 1");
  return MOGeometricLaw(1.0 - (1.0 + gamma) * p11, 1.0 - (1.0 + delta) * p11,
                        1.0 - (1.0 + gamma + delta) * p11);
}

double mo_geometric_pmf(const MOGeometricLaw& m, long k, long l) {
  require(k >= 0 && l >= 0, "Marshall-Olkin geometric pmf needs nonnegative indices");
  if (k < l) return std::pow(m.p00, k) * std::pow(m.q2, l - k) * (1.0 - m.p00 / m.q2 - m.q2 + m.p00);
  if (k > l) return std::pow(m.p00, l) * std::pow(m.q1, k - l) * (1.0 - m.q1 - m.p00 / m.q1 + m.p00);
  return std::pow(m.p00, k) * (1.0 - m.q1 - m.q2 + m.p00);
}

double mo_geometric_survival(const MOGeometricLaw& m, double k, double l) {
  double kk = k <= 0 ? 0.0 : std::ceil(k);
  double ll = l <= 0 ? 0.0 : std::ceil(l);
  if (kk < ll) return std::pow(m.p00, kk) * std::pow(m.q2, ll - kk);
  if (kk > ll) return std::pow(m.p00, ll) * std::pow(m.q1, kk - ll);
  return std::pow(m.p00, kk);
}

std::pair<long, long> draw_mo_geometric(const MOGeometricLaw& m, Rng& rng) {
  long t0 = static_cast<long>(geometric_draw(m.p00, rng));
  double u = uniform_open(rng) * (1.0 - m.p00);
  if (u < m.p11()) return {t0, t0};
  if (u < m.p11() + m.p10()) {
    // S succeeded, T failed: T keeps running
    return {t0, t0 + 1 + static_cast<long>(geometric_draw(m.q2, rng))};
  }
  return {t0 + 1 + static_cast<long>(geometric_draw(m.q1, rng)), t0};
}

std::vector<std::pair<long, long>> sample_mo_geometric(const MOGeometricLaw& law, std::uint64_t seed,
                                                       std::size_t count) {
  Rng rng = make_rng(seed);
  std::vector<std::pair<long, long>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(draw_mo_geometric(law, rng));
  return out;
}

std::vector<std::pair<long, long>> sample_mo_geometric_trials(const MOGeometricLaw& m,
                                                              std::uint64_t seed, std::size_t count) {
  Rng rng = make_rng(seed);
  std::vector<std::pair<long, long>> out;
  out.reserve(count);
  const double c00 = m.p00, c01 = c00 + m.p01(), c10 = c01 + m.p10();
  for (std::size_t i = 0; i < count; ++i) {
    long x1 = -1, x2 = -1;
    for (long trial = 0; x1 < 0 || x2 < 0; ++trial) {
      double u = uniform_open(rng);
      int s, t;
      if (u < c00) s = 0, t = 0;
      else if (u < c01) s = 0, t = 1;
      else if (u < c10) s = 1, t = 0;
      else s = 1, t = 1;
      if (s == 1 && x1 < 0) x1 = trial;
      if (t == 1 && x2 < 0) x2 = trial;
    }
    out.emplace_back(x1, x2);
  }
  return out;
}

}  // namespace steinevt::dist

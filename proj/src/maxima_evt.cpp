#include "steinevt/maxima_evt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

namespace steinevt::maxima {

using dist::Family;
using std::numbers::pi;

namespace {

double gumbel(double x) { return std::exp(-std::exp(-x)); }

// F^n evaluated as exp(n log(1 - sf)) to keep precision when sf is small
double power_of_cdf(double sf, long n) {
  if (sf >= 1.0) return 0.0;
  if (sf <= 0.0) return 1.0;
  return std::exp(static_cast<double>(n) * std::log1p(-sf));
}

double lattice_step(const dist::MarginalLaw& law) { return -std::log(law.a); }

void check_stage(const MaxScenario& sc) {
  const char s = sc.stage;
  bool ok = s == 'a';
  if (sc.law.family == Family::StdNormal || sc.law.family == Family::Geometric)
    ok = s == 'a' || s == 'b' || s == 'c';
  if (sc.law.family == Family::StdCauchy) ok = s == 'a' || s == 'b';
  if (!ok)
    throw InvalidArgument("stage '" + std::string(1, s) + "' not defined for " +
                          dist::family_name(sc.law.family));
  if (sc.n < 1) throw InvalidArgument("sample size must be >= 1");
  if (!(sc.alpha > 0)) throw InvalidArgument("Weibull index alpha must be positive");
  const long m = stage_min_n(sc);
  if (sc.n < m)
    throw GateError("n = " + std::to_string(sc.n) + " below the stage validity n >= " + std::to_string(m),
                    m);
}

// decreasing in y on (0, inf): log(n phi(y) / y)
double log_mills_rate(long n, double y) {
  return std::log(static_cast<double>(n)) - 0.5 * y * y - 0.5 * std::log(2.0 * pi) - std::log(y);
}

}  // namespace

double evd_cdf(const EVD& evd, double x) {
  if (std::isnan(x)) throw InvalidArgument("evd_cdf at NaN");
  if (evd.family != EVDFamily::Gumbel && !(evd.alpha > 0))
    throw InvalidArgument("EVD index alpha must be positive");
  switch (evd.family) {
    case EVDFamily::Frechet: return x <= 0 ? 0.0 : std::exp(-std::pow(x, -evd.alpha));
    case EVDFamily::Weibull: return x >= 0 ? 1.0 : std::exp(-std::pow(-x, evd.alpha));
    case EVDFamily::Gumbel: return gumbel(x);
  }
  return 0.0;
}

long stage_min_n(const MaxScenario& sc) {
  if (sc.law.family == Family::StdNormal) return sc.stage == 'a' ? 2 : 21;
  return 1;
}

double normal_an(long n) { return 1.0 / std::sqrt(2.0 * std::log(static_cast<double>(n))); }

double normal_bn(long n) {
  const double ln = std::log(static_cast<double>(n));
  return std::sqrt(2.0 * ln) - (std::log(ln) + std::log(4.0 * pi)) / (2.0 * std::sqrt(2.0 * ln));
}

StageFunctions stage_functions(const MaxScenario& sc) {
  check_stage(sc);
  const auto law = sc.law;
  const long n = sc.n;
  const double dn = static_cast<double>(n), ln = std::log(dn);
  StageFunctions f;
  f.variable = "x";

  // the exact side always reads P(X_(n) <= y(x)) through the marginal survival function
  auto exact_via = [law, n](std::function<double(double)> to_y) {
    return [law, n, to_y](double x) { return power_of_cdf(dist::survival(law, to_y(x)), n); };
  };
  auto gumbel_q = [](double u) { return -std::log(-std::log(u)); };

  switch (law.family) {
    case Family::Exponential: {
      const double rate = law.a;
      f.exact = exact_via([=](double x) { return (x + ln) / rate; });
      f.target = gumbel;
      f.target_quantile = gumbel_q;
      break;
    }
    case Family::Pareto: {
      const double alpha = law.a, scale = law.b * std::pow(dn, 1.0 / law.a);
      f.exact = exact_via([=](double x) { return scale * x; });
      f.target = [alpha](double x) { return evd_cdf({EVDFamily::Frechet, alpha}, x); };
      f.target_quantile = [alpha](double u) { return std::pow(-std::log(u), -1.0 / alpha); };
      f.domain_lo = 0.0;
      break;
    }
    case Family::Uniform: {
      const double alpha = sc.alpha, lo = law.a, hi = law.b;
      f.exact = exact_via([=](double x) { return -std::pow(-x, alpha) * (hi - lo) / dn + hi; });
      f.target = [alpha](double x) { return evd_cdf({EVDFamily::Weibull, alpha}, x); };
      f.target_quantile = [alpha](double u) { return -std::pow(-std::log(u), 1.0 / alpha); };
      f.domain_hi = 0.0;
      break;
    }
    case Family::StdNormal: {
      if (sc.stage == 'c') {
        const double an = normal_an(n), bn = normal_bn(n);
        f.exact = exact_via([=](double x) { return an * x + bn; });
        f.target = gumbel;
        f.target_quantile = gumbel_q;
        break;
      }
      f.variable = "y";
      f.exact = exact_via([](double y) { return y; });
      if (sc.stage == 'a') {
        f.target = [dn](double y) { return std::exp(-dn * dist::normal_sf(y)); };
        f.target_quantile = [dn](double u) {
          double p = -std::log(u) / dn;
          if (p >= 1.0) return -40.0;
          return -dist::quantile(dist::MarginalLaw::std_normal(), p);
        };
      } else {
        f.target = [n](double y) { return y <= 0 ? 0.0 : std::exp(-std::exp(log_mills_rate(n, y))); };
        f.target_quantile = [n](double u) {
          const double level = std::log(-std::log(u));
          auto g = [&](double y) { return log_mills_rate(n, y) - level; };
          boost::math::tools::eps_tolerance<double> tol(50);
          auto r = boost::math::tools::bisect(g, 1e-12, 60.0, tol);
          return 0.5 * (r.first + r.second);
        };
        f.domain_lo = 0.0;
      }
      break;
    }
    case Family::StdCauchy: {
      if (sc.stage == 'a') {
        f.variable = "y";
        f.exact = exact_via([](double y) { return y; });
        f.target = [law, dn](double y) { return std::exp(-dn * dist::survival(law, y)); };
        f.target_quantile = [dn](double u) {
          double p = -std::log(u) / dn;  // F-bar(y) = p with y > 0
          if (p >= 0.5) return 1e-300;
          return 1.0 / std::tan(pi * p);
        };
      } else {
        f.exact = exact_via([dn](double x) { return dn * x / pi; });
        f.target = [](double x) { return evd_cdf({EVDFamily::Frechet, 1.0}, x); };
        f.target_quantile = [](double u) { return -1.0 / std::log(u); };
      }
      f.domain_lo = 0.0;
      break;
    }
    case Family::Geometric: {
      const double L = lattice_step(law), q = law.a;
      const double scale = sc.stage == 'c' ? 1.0 - q : L;
      // X_(n) < y  <=>  no observation reaches y, i.e. (1 - P(X >= y))^n
      f.exact = exact_via([=](double x) {
        const double y = (ln + x) / scale, k = std::round(y);
        return std::abs(y - k) <= 1e-9 * std::max(1.0, k) ? k : y;
      });
      f.target = gumbel;
      f.target_quantile = gumbel_q;
      if (sc.stage == 'a') f.variable = "k*";
      break;
    }
  }
  return f;
}

BoundReport max_bound(const MaxScenario& sc) {
  check_stage(sc);
  const long n = sc.n;
  const double dn = static_cast<double>(n), ln = std::log(dn);
  const std::string fam = dist::family_name(sc.law.family);
  BoundReport r;
  r.name = "max-" + fam + "-" + std::string(1, sc.stage);
  r.meta["n"] = dn;

  const std::string poi = "Poisson approximation of P(max <= y)";
  switch (sc.law.family) {
    case Family::Exponential:
      r.add("poisson", "log n/n", ln / dn, "exponential maxima, Gumbel limit");
      r.add("poisson", "1/n", 1.0 / dn, "exponential maxima, Gumbel limit");
      r.meta["a_n"] = 1.0 / sc.law.a;
      r.meta["b_n"] = ln / sc.law.a;
      break;
    case Family::Pareto:
      r.add("poisson", "log n/n", ln / dn, "Pareto maxima, Frechet limit");
      r.add("poisson", "1/n", 1.0 / dn, "Pareto maxima, Frechet limit");
      r.meta["a_n"] = sc.law.b * std::pow(dn, 1.0 / sc.law.a);
      r.meta["b_n"] = 0.0;
      break;
    case Family::Uniform:
      r.add("poisson", "log n/n", ln / dn, "uniform maxima, Weibull limit");
      r.add("poisson", "1/n", 1.0 / dn, "uniform maxima, Weibull limit");
      r.meta["alpha"] = sc.alpha;
      r.meta["b_n"] = sc.law.b;
      break;
    case Family::StdNormal:
      r.add("a", "log n/n", ln / dn, poi);
      r.add("a", "1/n", 1.0 / dn, poi);
      if (sc.stage >= 'b') {
        r.add("b", "1/(2 log n)", 1.0 / (2.0 * ln), "Mills ratio step");
        r.add("b", "exp(-0.1 sqrt(log n))", std::exp(-0.1 * std::sqrt(ln)), "Mills ratio step");
      }
      if (sc.stage == 'c') {
        const double c = std::log(ln) + std::log(4.0 * pi);
        r.add("c", "69 (log log n + log 4 pi)^2/log n", 69.0 * c * c / ln, "Gumbel normalisation step");
      }
      r.meta["a_n"] = normal_an(n);
      r.meta["b_n"] = normal_bn(n);
      r.notes.push_back("normal cdf via erfc; relative error near machine precision");
      break;
    case Family::StdCauchy:
      if (sc.stage == 'a') {
        r.add("a", "log n/n", ln / dn, poi);
        r.add("a", "1.74/n", 1.74 / dn, poi);
      } else {
        r.add("b", "log n/n", ln / dn, "Cauchy maxima, Frechet limit");
        r.add("b", "pi^2 log^3 n/(3 n^2)", pi * pi * ln * ln * ln / (3.0 * dn * dn),
              "Cauchy maxima, Frechet limit");
        r.add("b", "1/n", 1.0 / dn, "Cauchy maxima, Frechet limit");
        r.meta["a_n"] = dn / pi;
      }
      break;
    case Family::Geometric: {
      const double q = sc.law.a, L = lattice_step(sc.law);
      r.add("a", "log n/(q n)", ln / (q * dn), "discretised Gumbel");
      r.add("a", "1/n", 1.0 / dn, "discretised Gumbel");
      if (sc.stage >= 'b') r.add("b", "e^-1 log(1/q)", L / std::numbers::e, "continuous Gumbel");
      if (sc.stage == 'c')
        r.add("c", "(1-q)/(2q) (log^2 n + e^-1)", (1.0 - q) / (2.0 * q) * (ln * ln + 1.0 / std::numbers::e),
              "Gumbel with 1/(1-q) scaling");
      r.meta["q"] = q;
      r.meta["a_n"] = sc.stage == 'c' ? 1.0 / (1.0 - q) : 1.0 / L;
      r.meta["b_n"] = ln * r.meta["a_n"];
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

OracleResult geometric_oracle(const MaxScenario& sc, const StageFunctions& f, Exec exec) {
  const double q = sc.law.a, L = lattice_step(sc.law);
  const double ln = std::log(static_cast<double>(sc.n));
  const double scale = sc.stage == 'c' ? 1.0 - q : L;
  // beyond kmax both n q^k and exp(-x) are below 1e-17
  const long kmax = static_cast<long>(std::ceil((40.0 + ln) / std::min(L, scale))) + 2;

  OracleResult out;
  if (sc.stage == 'a') {
    // P(X_(n) < k) = (1 - q^k)^n read at the integer k itself; going through (log n + k*)/L
    // can land just above k and pick up the next lattice step
    std::vector<double> ks, index;
    for (long k = 0; k <= kmax; ++k) ks.push_back(-ln + k * L), index.push_back(static_cast<double>(k));
    auto exact_at = [&](double k) { return power_of_cdf(std::pow(q, k), sc.n); };
    auto target_at = [&](double k) { return f.target(ks[static_cast<std::size_t>(k)]); };
    GridMax g = grid_abs_diff_max(index, exact_at, target_at, exec);
    out.sup = g.value;
    out.argmax = ks[g.index];
    out.evaluations = ks.size();
    return out;
  }
  // P(X_(n) < y) is constant on (k, k+1]; the sup over that cell of |const - target| sits at
  // one of the two ends, the left one as a one-sided limit
  const long n = sc.n;
  std::vector<double> xs;
  std::vector<double> step_value;
  for (long k = 0; k <= kmax * 2; ++k) {
    double e = power_of_cdf(std::pow(q, static_cast<double>(k + 1)), n);
    xs.push_back(k * scale - ln);
    step_value.push_back(e);
    xs.push_back((k + 1) * scale - ln);
    step_value.push_back(e);
  }
  std::vector<double> index(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) index[i] = static_cast<double>(i);
  auto exact_at = [&](double i) { return step_value[static_cast<std::size_t>(i)]; };
  auto target_at = [&](double i) { return f.target(xs[static_cast<std::size_t>(i)]); };
  GridMax g = grid_abs_diff_max(index, exact_at, target_at, exec);
  out.sup = std::max(g.value, f.target(-ln));  // y <= 0: exact is 0
  out.argmax = xs[g.index];
  out.evaluations = xs.size();
  return out;
}

}  // namespace

OracleResult kolmogorov_oracle(const MaxScenario& sc, Exec exec, std::size_t base_grid, double stable_tol) {
  StageFunctions f = stage_functions(sc);
  if (sc.law.family == Family::Geometric) return geometric_oracle(sc, f, exec);
  if (base_grid < 16) throw InvalidArgument("grid too coarse");

  // grid laid out in target quantiles, with log-spaced tails on both sides
  std::vector<double> us;
  for (std::size_t i = 1; i <= base_grid; ++i) us.push_back(static_cast<double>(i) / (base_grid + 1));
  for (int k = 4; k <= 15; ++k) {
    us.push_back(std::pow(10.0, -k));
    us.push_back(1.0 - std::pow(10.0, -k));
  }
  std::vector<double> xs;
  for (double u : us) {
    double x = f.target_quantile(u);
    if (std::isfinite(x) && x > f.domain_lo && x < f.domain_hi) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.size() < 3) throw NumericalError("oracle grid degenerate");

  OracleResult out;
  GridMax g = grid_abs_diff_max(xs, f.exact, f.target, exec);
  out.sup = g.value;
  out.argmax = xs[g.index];
  out.evaluations = xs.size();

  double lo = xs[g.index == 0 ? 0 : g.index - 1];
  double hi = xs[std::min(g.index + 1, xs.size() - 1)];
  const std::size_t m = 400;
  int quiet = 0;
  for (int it = 0; it < 80 && quiet < 2; ++it) {
    std::vector<double> fine(m + 1);
    for (std::size_t i = 0; i <= m; ++i) fine[i] = lo + (hi - lo) * static_cast<double>(i) / m;
    GridMax h = grid_abs_diff_max(fine, f.exact, f.target, exec);
    out.evaluations += fine.size();
    ++out.refinements;
    const double prev = out.sup;
    if (h.value > out.sup) {
      out.sup = h.value;
      out.argmax = fine[h.index];
    }
    out.last_change = out.sup - prev;
    quiet = out.last_change < stable_tol ? quiet + 1 : 0;
    const std::size_t j = h.index;
    lo = fine[j == 0 ? 0 : j - 1];
    hi = fine[std::min(j + 1, m)];
    if (!(hi > lo)) break;
  }
  if (quiet < 2 && hi > lo) throw NumericalError("oracle refinement did not stabilise");
  return out;
}

BoundReport max_bound_verified(const MaxScenario& sc, Exec exec) {
  BoundReport r = max_bound(sc);
  OracleResult o = kolmogorov_oracle(sc, exec);
  r.oracle = o.sup;
  r.meta["oracle_argmax"] = o.argmax;
  r.meta["oracle_refinements"] = o.refinements;
  r.meta["oracle_last_change"] = o.last_change;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

void check_threshold(const dist::MarginalLaw& law, long n, double u) {
  const double dn = static_cast<double>(n);
  if (n < 1) throw InvalidArgument("sample size must be >= 1");
  if (!std::isfinite(u)) throw InvalidArgument("threshold must be finite");
  switch (law.family) {
    case Family::Exponential:
    case Family::Geometric:
      if (u < -std::log(dn)) throw InvalidArgument("threshold below -log n");
      break;
    case Family::Pareto:
      if (u < std::pow(dn, -1.0 / law.a)) throw InvalidArgument("threshold below n^(-1/alpha)");
      break;
    case Family::Uniform:
      if (!(u >= -dn && u < 0)) throw InvalidArgument("threshold must lie in [-n, 0)");
      break;
    case Family::StdNormal: {
      if (n < 5) throw GateError("normal MPPE bound needs n >= 5", 5);
      const double ll = std::log(std::log(dn));
      if (u > 0 || u < -ll) throw GateError("normal MPPE bound needs u* in [-log log n, 0]");
      break;
    }
    case Family::StdCauchy:
      if (!(u > 0)) throw InvalidArgument("Cauchy threshold must be positive");
      break;
  }
}

}  // namespace

double mppe_exceedance_probability(const dist::MarginalLaw& law, long n, double u) {
  check_threshold(law, n, u);
  const double dn = static_cast<double>(n), ln = std::log(dn);
  switch (law.family) {
    case Family::Exponential: return dist::survival(law, (u + ln) / law.a);
    case Family::Pareto: return dist::survival(law, law.b * std::pow(dn, 1.0 / law.a) * u);
    case Family::Uniform: return -u / dn;
    case Family::StdNormal: return dist::normal_sf(normal_an(n) * u + normal_bn(n));
    case Family::StdCauchy: return dist::survival(law, dn * u / pi);
    case Family::Geometric: return dist::survival(law, (u + ln) / lattice_step(law));
  }
  return 0.0;
}

stein::IntensitySpec mppe_intensity(const dist::MarginalLaw& law, long n, double u) {
  check_threshold(law, n, u);
  const double dn = static_cast<double>(n), ln = std::log(dn);
  switch (law.family) {
    case Family::Exponential:
      return stein::IntensitySpec::interval(u, INFINITY, [](double x) { return std::exp(-x); });
    case Family::Pareto: {
      const double a = law.a;
      return stein::IntensitySpec::interval(u, INFINITY,
                                            [a](double x) { return a * std::pow(x, -a - 1.0); });
    }
    case Family::Uniform: return stein::IntensitySpec::interval(u, 0.0, [](double) { return 1.0; });
    case Family::StdNormal: {
      const double an = normal_an(n), bn = normal_bn(n);
      return stein::IntensitySpec::interval(
          u, INFINITY, [=](double x) { return dn * an * dist::normal_pdf(an * x + bn); });
    }
    case Family::StdCauchy: {
      const double c = (pi / dn) * (pi / dn);
      return stein::IntensitySpec::interval(u, INFINITY, [c](double x) { return 1.0 / (c + x * x); });
    }
    case Family::Geometric: {
      const double L = lattice_step(law), q = law.a;
      std::vector<stein::Atom> atoms;
      const long k0 = static_cast<long>(std::ceil((u + ln) / L - 1e-12));
      for (long k = k0;; ++k) {
        const double ks = -ln + k * L, mass = (1.0 - q) * std::exp(-ks);
        atoms.push_back({ks, 0.0, mass});
        if (mass < 1e-18) break;
      }
      return stein::IntensitySpec::lattice(u, INFINITY, std::move(atoms));
    }
  }
  throw InvalidArgument("unknown family");
}

stein::IntensitySpec mppe_limit_intensity(const dist::MarginalLaw& law, long n, double u) {
  check_threshold(law, n, u);
  switch (law.family) {
    case Family::StdNormal:
    case Family::Geometric:
      return stein::IntensitySpec::interval(u, INFINITY, [](double x) { return std::exp(-x); });
    case Family::StdCauchy:
      return stein::IntensitySpec::interval(u, INFINITY, [](double x) { return 1.0 / (x * x); });
    default: return mppe_intensity(law, n, u);
  }
}

BoundReport mppe_report(const dist::MarginalLaw& law, long n, double u) {
  check_threshold(law, n, u);
  const double dn = static_cast<double>(n);
  const double p = mppe_exceedance_probability(law, n, u);
  BoundReport r;
  r.name = "mppe-" + dist::family_name(law.family);
  r.meta["n"] = dn;
  r.meta["u_star"] = u;
  r.meta["exceedance_probability"] = p;
  r.meta["expected_count"] = dn * p;

  const std::string michel = "MPPE vs PRM of its mean measure (i.i.d. marks)";
  switch (law.family) {
    case Family::Exponential: r.add("dTV", "e^-u*/n", std::exp(-u) / dn, michel); break;
    case Family::Pareto: r.add("dTV", "1/(n u*^alpha)", 1.0 / (dn * std::pow(u, law.a)), michel); break;
    case Family::Uniform: r.add("dTV", "-u*/n", -u / dn, michel); break;
    case Family::StdNormal: {
      const double ln = std::log(dn), c = 3.0 * std::log(ln) + std::log(4.0 * pi);
      r.add("dTV", "6 e^-u*/n", 6.0 * std::exp(-u) / dn, michel);
      r.add("dTV", "(3 log log n + log 4 pi)^2/(16 log n) e^-u*", c * c / (16.0 * ln) * std::exp(-u),
            "PRM with normal mean measure vs PRM(e^-x)");
      break;
    }
    case Family::StdCauchy:
      r.add("dTV", "1/(n u*)", 1.0 / (dn * u), michel);
      r.add("dTV", "pi^2/(3 n^2 u*^3)", pi * pi / (3.0 * dn * dn * u * u * u),
            "PRM with Cauchy mean measure vs PRM(x^-2)");
      break;
    case Family::Geometric:
      r.add("dTV", "e^-u*/n", std::exp(-u) / dn, "MPPE vs lattice PRM");
      r.add("d2", "2 (log(1/q) ^ 1)", 2.0 * std::min(lattice_step(law), 1.0),
            "lattice PRM vs PRM(e^-x), d2 metric");
      break;
  }

  const double count = p > 0 ? stein::binomial_poisson_dtv(n, p).value : 0.0;
  r.meta["count_dtv_exact"] = count;
  double oracle = count;
  if (law.family == Family::StdNormal || law.family == Family::StdCauchy) {
    Quad l1 = stein::prm_dtv_bound(mppe_intensity(law, n, u), mppe_limit_intensity(law, n, u));
    r.meta["intensity_l1"] = l1.value;
    r.meta["intensity_l1_error"] = l1.error;
    oracle += l1.value;
  }
  if (law.family == Family::Geometric) r.notes.push_back("d2 stage has no computable oracle");
  r.oracle = oracle;
  return r;
}

}  // namespace steinevt::maxima

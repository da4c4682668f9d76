#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/cauchy.hpp>
#include <boost/math/distributions/exponential.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/pareto.hpp>

#include "steinevt/distributions.hpp"
#include "steinevt/report.hpp"

using namespace steinevt;
using namespace steinevt::dist;

namespace {

double ks_statistic(std::vector<double> xs, const MarginalLaw& law) {
  std::sort(xs.begin(), xs.end());
  const double m = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(law, xs[i]);
    d = std::max({d, std::abs(f - i / m), std::abs((i + 1) / m - f)});
  }
  return d;
}

}  // namespace

TEST_CASE("cdfs agree with Boost.Math") {
  boost::math::normal_distribution<> nd;
  boost::math::cauchy_distribution<> cd;
  boost::math::exponential_distribution<> ed(2.5);
  boost::math::pareto_distribution<> pd(1.5, 3.0);  // scale, shape
  for (double x : {-30.0, -8.0, -1.3, 0.0, 0.4, 2.0, 7.5, 37.0}) {
    CHECK(cdf(MarginalLaw::std_normal(), x) == doctest::Approx(boost::math::cdf(nd, x)).epsilon(1e-13));
    CHECK(normal_sf(x) == doctest::Approx(boost::math::cdf(boost::math::complement(nd, x))).epsilon(1e-13));
    CHECK(cdf(MarginalLaw::std_cauchy(), x) == doctest::Approx(boost::math::cdf(cd, x)).epsilon(1e-13));
    if (x >= 0) CHECK(cdf(MarginalLaw::exponential(2.5), x) == doctest::Approx(boost::math::cdf(ed, x)).epsilon(1e-14));
    if (x >= 1.5)
      CHECK(survival(MarginalLaw::pareto(3.0, 1.5), x) ==
            doctest::Approx(boost::math::cdf(boost::math::complement(pd, x))).epsilon(1e-14));
  }
  CHECK(normal_pdf(1.0) == doctest::Approx(boost::math::pdf(nd, 1.0)).epsilon(1e-15));
}

TEST_CASE("quantile inverts cdf") {
  const std::vector<MarginalLaw> laws{MarginalLaw::exponential(0.7), MarginalLaw::pareto(2.0, 1.0),
                                      MarginalLaw::uniform(-1.0, 3.0), MarginalLaw::std_normal(),
                                      MarginalLaw::std_cauchy()};
  for (const auto& law : laws)
    for (double u : {1e-10, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9})
      CHECK(cdf(law, quantile(law, u)) == doctest::Approx(u).epsilon(1e-9));
}

TEST_CASE("geometric lattice conventions") {
  const auto g = MarginalLaw::geometric(0.6);
  CHECK(survival(g, 0.0) == 1.0);
  CHECK(survival(g, 3.0) == doctest::Approx(std::pow(0.6, 3)));
  CHECK(survival(g, 2.2) == doctest::Approx(std::pow(0.6, 3)));
  CHECK(cdf(g, 2.0) == doctest::Approx(1.0 - std::pow(0.6, 3)));
  // frequency check against the pmf (1-q) q^k
  const auto xs = sample(g, 11, 200000);
  for (int k = 0; k < 4; ++k) {
    const double freq = std::count(xs.begin(), xs.end(), static_cast<double>(k)) / 200000.0;
    CHECK(freq == doctest::Approx(0.4 * std::pow(0.6, k)).epsilon(0.03));
  }
}

TEST_CASE("continuous samplers pass a Kolmogorov-Smirnov check") {
  // 99.9% critical value of the one-sample KS statistic, 1.95/sqrt(m)
  const std::size_t m = 20000;
  const double crit = 1.95 / std::sqrt(static_cast<double>(m));
  for (const auto& law : {MarginalLaw::exponential(1.0), MarginalLaw::pareto(1.5, 2.0), MarginalLaw::std_normal(),
                          MarginalLaw::std_cauchy(), MarginalLaw::uniform(0.0, 1.0)})
    CHECK(ks_statistic(sample(law, 5, m), law) < crit);
}

TEST_CASE("sampling is reproducible from the seed") {
  CHECK(sample(MarginalLaw::std_normal(), 42, 50) == sample(MarginalLaw::std_normal(), 42, 50));
  CHECK(sample(MarginalLaw::std_normal(), 42, 50) != sample(MarginalLaw::std_normal(), 43, 50));
}

TEST_CASE("family names round trip") {
  for (auto f : {Family::Exponential, Family::Pareto, Family::Uniform, Family::StdNormal, Family::StdCauchy,
                 Family::Geometric})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK_THROWS_AS(family_from_name("weibull"), InvalidArgument);
  CHECK_THROWS_AS(MarginalLaw::exponential(-1.0), InvalidArgument);
  CHECK_THROWS_AS(MarginalLaw::geometric(1.0), InvalidArgument);
}

TEST_CASE("Marshall-Olkin geometric pmf and survival") {
  const auto law = MOGeometricLaw::from_gamma_delta(1.5, 0.5, 0.1);
  CHECK(law.p10() == doctest::Approx(0.15));
  CHECK(law.p01() == doctest::Approx(0.05));
  CHECK(law.p11() == doctest::Approx(0.1));
  double total = 0.0;
  for (long k = 0; k < 400; ++k)
    for (long l = 0; l < 400; ++l) total += mo_geometric_pmf(law, k, l);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  // survival as a direct tail sum of the pmf
  for (auto [k, l] : {std::pair{0L, 0L}, {2L, 5L}, {6L, 1L}, {4L, 4L}}) {
    double tail = 0.0;
    for (long i = k; i < 400; ++i)
      for (long j = l; j < 400; ++j) tail += mo_geometric_pmf(law, i, j);
    CHECK(mo_geometric_survival(law, static_cast<double>(k), static_cast<double>(l)) ==
          doctest::Approx(tail).epsilon(1e-10));
  }
}

TEST_CASE("skip sampler matches the trial-by-trial reference") {
  const auto law = MOGeometricLaw::from_gamma_delta(1.0, 2.0, 0.05);
  const std::size_t m = 100000;
  const auto fast = sample_mo_geometric(law, 9, m);
  const auto slow = sample_mo_geometric_trials(law, 10, m);
  auto stats = [](const std::vector<std::pair<long, long>>& xs) {
    double m1 = 0, m2 = 0, tie = 0;
    for (auto [a, b] : xs) m1 += a, m2 += b, tie += (a == b);
    const double k = static_cast<double>(xs.size());
    return std::array<double, 3>{m1 / k, m2 / k, tie / k};
  };
  const auto a = stats(fast), b = stats(slow);
  // E X1 = q1/(1-q1)
  CHECK(a[0] == doctest::Approx(law.q1 / (1 - law.q1)).epsilon(0.02));
  CHECK(a[1] == doctest::Approx(law.q2 / (1 - law.q2)).epsilon(0.02));
  for (int i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(0.03));
}

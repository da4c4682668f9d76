#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "steinevt/maxima_evt.hpp"

using namespace steinevt;
using namespace steinevt::maxima;
using dist::MarginalLaw;

namespace {

// brute-force sup over a uniform grid of the given functions
double scan(const std::function<double(double)>& f, const std::function<double(double)>& g, double lo, double hi,
            int m) {
  double s = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double x = lo + (hi - lo) * i / m;
    s = std::max(s, std::abs(f(x) - g(x)));
  }
  return s;
}

}  // namespace

TEST_CASE("extreme value cdfs") {
  CHECK(evd_cdf({EVDFamily::Gumbel}, 0.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(evd_cdf({EVDFamily::Frechet, 2.0}, -1.0) == 0.0);
  CHECK(evd_cdf({EVDFamily::Frechet, 2.0}, 2.0) == doctest::Approx(std::exp(-0.25)));
  CHECK(evd_cdf({EVDFamily::Weibull, 1.0}, -0.5) == doctest::Approx(std::exp(-0.5)));
  CHECK(evd_cdf({EVDFamily::Weibull, 1.0}, 0.1) == 1.0);
}

TEST_CASE("exponential maxima: closed-form bound and brute-force oracle") {
  for (long n : {25L, 100L, 1000L}) {
    const MaxScenario sc{MarginalLaw::exponential(1.0), n, 'a', 1.0};
    const BoundReport r = max_bound(sc);
    CHECK(r.total == doctest::Approx(std::log(double(n)) / n + 1.0 / n).epsilon(1e-14));
    // the law of the normalised maximum is (1 - e^{-x}/n)^n
    auto exact = [n](double x) {
      const double s = std::exp(-x) / n;
      return s >= 1 ? 0.0 : std::pow(1 - s, double(n));
    };
    auto gumbel = [](double x) { return std::exp(-std::exp(-x)); };
    const double brute = scan(exact, gumbel, -std::log(double(n)), 20.0, 400000);
    const OracleResult o = kolmogorov_oracle(sc);
    CHECK(o.sup == doctest::Approx(brute).epsilon(1e-6));
    CHECK(o.sup <= r.total);
  }
  CHECK(max_bound({MarginalLaw::exponential(1.0), 100, 'a', 1.0}).total == doctest::Approx(0.05605170185988092));
}

TEST_CASE("oracle is stable under grid refinement") {
  for (const auto& law : {MarginalLaw::exponential(1.0), MarginalLaw::std_normal(), MarginalLaw::std_cauchy()}) {
    const MaxScenario sc{law, 100, 'a', 1.0};
    const double coarse = kolmogorov_oracle(sc, Exec::Serial, 4000).sup;
    const double fine = kolmogorov_oracle(sc, Exec::Serial, 16000).sup;
    CHECK(std::abs(coarse - fine) <= 1e-6);
  }
}

TEST_CASE("serial and parallel oracles agree exactly") {
  const MaxScenario sc{MarginalLaw::pareto(2.0, 1.0), 200, 'a', 1.0};
  const OracleResult a = kolmogorov_oracle(sc, Exec::Serial), b = kolmogorov_oracle(sc, Exec::Parallel);
  CHECK(a.sup == b.sup);
  CHECK(a.argmax == b.argmax);
}

TEST_CASE("every stage stays below its bound") {
  std::vector<MaxScenario> all;
  for (long n : {25L, 100L, 1000L}) {
    all.push_back({MarginalLaw::pareto(1.5, 1.0), n, 'a', 1.0});
    all.push_back({MarginalLaw::uniform(0.0, 1.0), n, 'a', 1.0});
    all.push_back({MarginalLaw::std_cauchy(), n, 'a', 1.0});
    all.push_back({MarginalLaw::std_cauchy(), n, 'b', 1.0});
    for (char st : {'a', 'b', 'c'}) all.push_back({MarginalLaw::std_normal(), n, st, 1.0});
  }
  for (long n : {100L, 1000L})
    for (double q : {0.3, 0.9}) all.push_back({MarginalLaw::geometric(q), n, 'a', 1.0});
  for (const auto& sc : all) {
    const BoundReport r = max_bound_verified(sc, Exec::Parallel);
    INFO(r.name << " n=" << sc.n);
    REQUIRE(r.oracle);
    CHECK(*r.oracle <= r.total);
  }
}

TEST_CASE("geometric oracle is exact on the lattice") {
  const double q = 0.3;
  const long n = 100;
  const MaxScenario sc{MarginalLaw::geometric(q), n, 'a', 1.0};
  const StageFunctions f = stage_functions(sc);
  const double L = -std::log(q);
  // P(max < k) = (1 - q^k)^n at the lattice points, normalised by x = k L - log n
  double brute = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double x = k * L - std::log(double(n));
    brute = std::max(brute, std::abs(std::pow(1 - std::pow(q, k), double(n)) - f.target(x)));
  }
  CHECK(kolmogorov_oracle(sc).sup == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("stage gates") {
  CHECK(stage_min_n({MarginalLaw::std_normal(), 10, 'a', 1.0}) <= 10);
  CHECK(stage_min_n({MarginalLaw::std_normal(), 10, 'b', 1.0}) == 21);
  CHECK_THROWS_AS(max_bound({MarginalLaw::std_normal(), 10, 'c', 1.0}), GateError);
  CHECK_THROWS_AS(max_bound({MarginalLaw::exponential(1.0), 10, 'z', 1.0}), InvalidArgument);
}

TEST_CASE("normal norming constants") {
  const long n = 1000;
  CHECK(normal_an(n) == doctest::Approx(1.0 / std::sqrt(2.0 * std::log(1000.0))).epsilon(1e-14));
  // n P(X > b_n) -> 1; slowly, the log-log correction leaves about 10% at n = 1000
  CHECK(n * dist::normal_sf(normal_bn(n)) == doctest::Approx(1.0).epsilon(0.15));
  CHECK(1e6 * dist::normal_sf(normal_bn(1000000)) == doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("MPPE intensity has mass n P(X* >= u*)") {
  const std::vector<std::pair<MarginalLaw, double>> cases{
      {MarginalLaw::exponential(1.0), 0.5}, {MarginalLaw::pareto(2.0, 1.0), 0.5}, {MarginalLaw::std_normal(), -0.5}};
  for (const auto& [law, u] : cases) {
    const long n = 500;
    const double p = mppe_exceedance_probability(law, n, u);
    CHECK(stein::total_mass(mppe_intensity(law, n, u)).value == doctest::Approx(n * p).epsilon(1e-8));
  }
  // exponential: n P(X >= u* + log n) = e^{-u*}
  CHECK(mppe_exceedance_probability(MarginalLaw::exponential(1.0), 1000, 0.5) * 1000 ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(stein::total_mass(mppe_limit_intensity(MarginalLaw::exponential(1.0), 1000, 0.5)).value ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-10));
}

TEST_CASE("MPPE report dominates its oracle") {
  for (long n : {100L, 1000L}) {
    const BoundReport r = mppe_report(MarginalLaw::exponential(1.0), n, -std::log(std::log(double(n))));
    REQUIRE(r.oracle);
    CHECK(*r.oracle <= r.total);
  }
}

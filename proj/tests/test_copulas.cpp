#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "steinevt/copulas.hpp"
#include "steinevt/distributions.hpp"
#include "steinevt/report.hpp"

using namespace steinevt;
using namespace steinevt::cop;

namespace {

std::vector<double> unit_grid(int m) {
  std::vector<double> g;
  for (int i = 0; i <= m; ++i) g.push_back(static_cast<double>(i) / m);
  return g;
}

// sup over a grid of |empirical C - C|
double empirical_sup(const Copula& c, const std::vector<std::pair<double, double>>& xs) {
  double d = 0;
  const auto g = unit_grid(20);
  for (double u : g)
    for (double v : g) {
      double k = 0;
      for (auto [a, b] : xs) k += (a <= u && b <= v);
      d = std::max(d, std::abs(k / xs.size() - copula_cdf(c, u, v)));
    }
  return d;
}

const std::vector<Copula>& all_copulas() {
  static const std::vector<Copula> cs{Copula::independence(), Copula::comonotonic(), Copula::countermonotonic(),
                                      Copula::gumbel(1.5),    Copula::gumbel(3.0),   Copula::clayton(2.0),
                                      Copula::clayton(-0.5),  Copula::marshall_olkin(0.3, 0.7)};
  return cs;
}

}  // namespace

TEST_CASE("closed forms") {
  const double u = 0.3, v = 0.8, th = 2.5;
  CHECK(copula_cdf(Copula::gumbel(th), u, v) ==
        doctest::Approx(std::exp(-std::pow(std::pow(-std::log(u), th) + std::pow(-std::log(v), th), 1 / th))));
  CHECK(copula_cdf(Copula::clayton(th), u, v) ==
        doctest::Approx(std::pow(std::pow(u, -th) + std::pow(v, -th) - 1, -1 / th)));
  CHECK(copula_cdf(Copula::marshall_olkin(0.4, 0.6), u, v) ==
        doctest::Approx(std::min(std::pow(u, 0.6) * v, u * std::pow(v, 0.4))));
  CHECK(survival_copula_cdf(Copula::independence(), u, v) == doctest::Approx(u * v));
  CHECK_THROWS_AS(Copula::gumbel(0.5), InvalidArgument);
  CHECK_THROWS_AS(copula_cdf(Copula::independence(), 1.2, 0.5), InvalidArgument);
}

TEST_CASE("margins, groundedness and the rectangle inequality") {
  const auto g = unit_grid(25);
  for (const auto& c : all_copulas()) {
    INFO(c.name());
    for (double x : g) {
      CHECK(copula_cdf(c, x, 1.0) == doctest::Approx(x).epsilon(1e-12));
      CHECK(copula_cdf(c, 1.0, x) == doctest::Approx(x).epsilon(1e-12));
      CHECK(copula_cdf(c, 0.0, x) == doctest::Approx(0.0));
    }
    double worst = 0;
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
      for (std::size_t j = 0; j + 1 < g.size(); ++j) worst = std::min(worst, rectangle_mass(c, g[i], g[i + 1], g[j], g[j + 1]));
    CHECK(worst >= -1e-14);
    const auto fr = frechet_bounds_check(c, g);
    CHECK(fr.lower_ok);
    CHECK(fr.upper_ok);
  }
}

TEST_CASE("conditional cdf is the u-derivative") {
  for (const auto& c : {Copula::independence(), Copula::gumbel(2.0), Copula::clayton(1.5), Copula::clayton(-0.3)})
    for (double u : {0.2, 0.5, 0.9})
      for (double v : {0.1, 0.6, 0.95}) {
        const double h = 1e-5;
        const double fd = (copula_cdf(c, u + h, v) - copula_cdf(c, u - h, v)) / (2 * h);
        CHECK(conditional_cdf(c, u, v) == doctest::Approx(fd).epsilon(1e-6));
      }
}

TEST_CASE("samplers reproduce the copula") {
  for (const auto& c : all_copulas()) {
    INFO(c.name());
    const auto xs = sample_copula(c, 31, 20000);
    CHECK(empirical_sup(c, xs) <= 0.02);
  }
}

TEST_CASE("Marshall-Olkin singular component") {
  const double a = 0.3, b = 0.7;
  const double k = a * b / (a + b - a * b);
  // the singular mass on u^a = v^b is the component at (1,1)
  CHECK(mo_copula_components(a, b, 1.0, 1.0).singular == doctest::Approx(k).epsilon(1e-14));
  for (double u : {0.2, 0.5, 0.9})
    for (double v : {0.3, 0.8}) {
      const auto parts = mo_copula_components(a, b, u, v);
      CHECK(parts.singular == doctest::Approx(mo_singular_by_quadrature(a, b, u, v)).epsilon(1e-10));
      CHECK(parts.absolutely_continuous + parts.singular ==
            doctest::Approx(copula_cdf(Copula::marshall_olkin(a, b), u, v)));
    }
  const auto xs = sample_copula(Copula::marshall_olkin(a, b), 4, 50000);
  double on_curve = 0;
  for (auto [u, v] : xs) on_curve += std::abs(std::pow(u, a) - std::pow(v, b)) < 1e-12;
  CHECK(on_curve / xs.size() == doctest::Approx(k).epsilon(0.03));
}

TEST_CASE("shock rates generate the copula as a survival copula") {
  const double a = 0.4, b = 0.25;
  const auto r = mo_shock_rates(a, b);
  const dist::MOExponentialLaw law(r.nu1, r.nu2, r.nu12);
  // U = exp(-(nu1+nu12) X1) is uniform; joint survival of (X1, X2) read through it is C
  for (double u : {0.1, 0.45, 0.8})
    for (double v : {0.2, 0.7}) {
      const double y1 = -std::log(u) / (r.nu1 + r.nu12), y2 = -std::log(v) / (r.nu2 + r.nu12);
      CHECK(dist::mo_exponential_survival(law, y1, y2) ==
            doctest::Approx(copula_cdf(Copula::marshall_olkin(a, b), u, v)).epsilon(1e-12));
    }
}

TEST_CASE("tail dependence: closed forms and numeric limits") {
  CHECK(*tail_dependence(Copula::gumbel(2.0)).upper == doctest::Approx(2 - std::sqrt(2.0)));
  CHECK(*tail_dependence(Copula::clayton(2.0)).lower == doctest::Approx(std::pow(2.0, -0.5)));
  CHECK(*tail_dependence(Copula::marshall_olkin(0.3, 0.7)).upper == doctest::Approx(0.3));
  CHECK_FALSE(tail_dependence(Copula::countermonotonic()).lower.has_value());
  for (const auto& c : all_copulas()) {
    if (c.kind == Kind::Countermonotonic) continue;
    INFO(c.name());
    const auto exact = tail_dependence(c);
    const auto num = tail_dependence_numeric(c);
    CHECK(*num.lower == doctest::Approx(*exact.lower).epsilon(1e-3).scale(1));
    CHECK(*num.upper == doctest::Approx(*exact.upper).epsilon(1e-3).scale(1));
  }
}

TEST_CASE("Aitken acceleration") {
  std::vector<double> seq;
  for (int k = 0; k < 12; ++k) seq.push_back(2.0 + 0.5 * std::pow(0.5, k) + 0.1 * std::pow(0.25, k));
  double spread = 0;
  CHECK(aitken_limit(seq, &spread) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(spread < 1e-8);
}

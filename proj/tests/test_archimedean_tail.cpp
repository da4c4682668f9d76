#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "steinevt/archimedean_tail.hpp"
#include "steinevt/numerics.hpp"
#include "steinevt/rng.hpp"

using namespace steinevt;
using namespace steinevt::arch;

namespace {

double phibar_direct(int id, double th, double r) {
  switch (id) {
    case 2: return std::pow(r, th);
    case 4: return std::pow(-std::log1p(-r), th);
    case 6: return -std::log1p(-std::pow(r, th));
    case 12: return std::pow(r / (1 - r), th);
    case 14: return std::pow(std::pow(1 - r, -1 / th) - 1, th);
    case 15: return std::pow(1 - std::pow(1 - r, 1 / th), th);
    case 21: return 1 - std::pow(1 - std::pow(r, th), 1 / th);
  }
  return NAN;
}

double w_direct(int id, double th, double r) { return std::pow(phibar_direct(id, th, r), 1 / th); }

// Richardson-extrapolated central differences
double d1(const std::function<double(double)>& f, double x, double h) {
  auto D = [&](double e) { return (f(x + e) - f(x - e)) / (2 * e); };
  return (4 * D(h) - D(2 * h)) / 3;
}
double d2(const std::function<double(double)>& f, double x, double h) {
  auto D = [&](double e) { return (f(x + e) - 2 * f(x) + f(x - e)) / (e * e); };
  return (4 * D(h) - D(2 * h)) / 3;
}

// expected number of joint exceedances in (0,s] x (0,t]
double box_count(const Family& f, double n, double s, double t) {
  return s + t - n * phibar_inv(f, phibar(f, s / n) + phibar(f, t / n));
}

}  // namespace

TEST_CASE("generators match their defining formulas") {
  for (int id : family_ids())
    for (double th : {1.5, 3.0})
      for (double r : {1e-6, 0.05, 0.3, 0.7}) {
        const Family f = Family::make(id, th);
        INFO("family " << id << " theta " << th << " r " << r);
        CHECK(phibar(f, r) == doctest::Approx(phibar_direct(id, th, r)).epsilon(1e-12));
        CHECK(phibar_inv(f, phibar(f, r)) == doctest::Approx(r).epsilon(1e-10));
      }
  CHECK_THROWS_AS(Family::make(5, 2.0), InvalidArgument);
  CHECK_THROWS_AS(Family::make(4, 0.5), InvalidArgument);
}

TEST_CASE("derivatives agree with finite differences on both sides of the series switch") {
  for (int id : family_ids())
    for (double th : {1.5, 3.0})
      for (double r : {0.02, 0.2, 0.24, 0.26, 0.5}) {
        const Family f = Family::make(id, th);
        const auto d = derivatives(f, r);
        auto w = [&](double x) { return w_direct(id, th, x); };
        auto h = [&](double x) { return w_direct(id, th, x) / x; };
        INFO("family " << id << " theta " << th << " r " << r);
        CHECK(d.w == doctest::Approx(w(r)).epsilon(1e-12));
        CHECK(d.h == doctest::Approx(h(r)).epsilon(1e-12));
        CHECK(d.dw == doctest::Approx(d1(w, r, 1e-4)).epsilon(1e-7));
        CHECK(d.dh == doctest::Approx(d1(h, r, 1e-4)).epsilon(1e-6).scale(1));
        CHECK(d.d2w == doctest::Approx(d2(w, r, 1e-3)).epsilon(1e-5).scale(1));
      }
}

TEST_CASE("h(0) values") {
  for (double th : {1.5, 3.0}) {
    CHECK(h0(Family::make(4, th)) == doctest::Approx(1.0));
    CHECK(h0(Family::make(6, th)) == doctest::Approx(1.0));
    CHECK(h0(Family::make(12, th)) == doctest::Approx(1.0));
    CHECK(h0(Family::make(14, th)) == doctest::Approx(1.0 / th));
    CHECK(h0(Family::make(15, th)) == doctest::Approx(1.0 / th));
    CHECK(h0(Family::make(21, th)) == doctest::Approx(std::pow(th, -1.0 / th)));
  }
}

TEST_CASE("theta-tilde recovers theta") {
  for (int id : family_ids())
    for (double th : {1.5, 3.0}) {
      double spread = 1;
      INFO("family " << id << " theta " << th);
      CHECK(std::abs(theta_tilde(Family::make(id, th), &spread) - th) <= 1e-4);
      CHECK(spread <= 1e-6);
    }
}

TEST_CASE("r0 is the edge of the region where w' <= 4 h0/3") {
  for (int id : {4, 12, 14, 15, 21})
    for (double th : {1.5, 3.0}) {
      const Family f = Family::make(id, th);
      const TailConstants tc = tail_constants(f);
      const double cap = 4.0 * tc.h0 / 3.0;
      INFO("family " << id << " theta " << th);
      // an independent fine grid on [0, r0]
      double worst = 0;
      for (int i = 1; i <= 20000; ++i) worst = std::max(worst, derivatives(f, tc.r0 * i / 20000.0).dw);
      CHECK(worst <= cap * (1 + 1e-12));
      CHECK(derivatives(f, tc.r0_raw + 1e-3).dw > cap);
      CHECK(tc.r0 <= tc.r0_raw);
      CHECK(tc.r0_raw - tc.r0 < 1e-3);
    }
}

TEST_CASE("family 4 at theta 1.5: published constants") {
  const TailConstants tc = tail_constants(Family::make(4, 1.5));
  CHECK(tc.r0 == doctest::Approx(0.250).epsilon(1e-12));
  CHECK(std::abs(tc.H - 0.731) <= 5e-3);
  CHECK(std::abs(tc.W - 1.778) <= 5e-3);
  CHECK(std::abs(tc.K - 16.2) <= 0.5);
  // W for the Gumbel generator is w''(r0) = (1-r0)^-2
  CHECK(tc.W == doctest::Approx(1.0 / (0.75 * 0.75)).epsilon(1e-6));
}

TEST_CASE("K grows with H and W") {
  const double base = k_constant(2.0, 1.0, 0.2, 0.5, 1.0);
  CHECK(k_constant(2.0, 1.0, 0.2, 0.6, 1.0) > base);
  CHECK(k_constant(2.0, 1.0, 0.2, 0.5, 1.2) > base);
}

TEST_CASE("exact intensity equals the mixed derivative of the expected count") {
  Rng rng = make_rng(2024);
  const double n = 1e4;
  for (int id : {4, 12, 14}) {
    const Family f = Family::make(id, 2.0);
    for (int rep = 0; rep < 5; ++rep) {
      const double s = 0.2 + 2.8 * uniform_open(rng), t = 0.2 + 2.8 * uniform_open(rng);
      auto D = [&](double e) {
        return (box_count(f, n, s + e, t + e) - box_count(f, n, s + e, t - e) - box_count(f, n, s - e, t + e) +
                box_count(f, n, s - e, t - e)) /
               (4 * e * e);
      };
      const double fd = (4 * D(1e-3) - D(2e-3)) / 3;
      CHECK(exact_intensity(f, n, s, t) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("limit intensity integrates to the closed box mass") {
  for (double th : {1.5, 3.0})
    for (auto [s, t] : {std::pair{1.0, 1.0}, {0.5, 2.0}, {3.0, 0.7}}) {
      // s = s0 a^2, t = t0 b^2 removes the corner singularity at the origin
      auto g = [th, s, t](double a, double b) {
        return a * b == 0 ? 0.0 : 4 * s * t * a * b * limit_intensity(th, s * a * a, t * b * b);
      };
      const Quad q = integrate2(g, 0, 1, 0, 1, false, 1e-9);
      CHECK(q.value == doctest::Approx(limit_box_mass(th, s, t)).epsilon(1e-6));
    }
  // family 2 is exact: its intensity coincides with the limit
  const Family g = Family::make(2, 2.0);
  CHECK(exact_intensity(g, 100, 0.7, 1.3) == doctest::Approx(limit_intensity(2.0, 0.7, 1.3)).epsilon(1e-12));
}

TEST_CASE("expected exceedances converge to the limit") {
  const Family f = Family::make(4, 1.5);
  double prev = INFINITY;
  for (double n : {1e2, 1e3, 1e4, 1e5}) {
    const auto e = expected_exceedances(f, n, 1.0, 1.0);
    CHECK(e.abs_diff < prev);
    CHECK(e.limit == doctest::Approx(2 - std::pow(2.0, 1 / 1.5)));
    prev = e.abs_diff;
  }
}

TEST_CASE("gate and sign of the total for family 4 at theta 1.5") {
  const Family f = Family::make(4, 1.5);
  ThresholdRule rule;
  rule.sqrt_log = true;
  CHECK(minimum_feasible_n(rule, 0.25) == 8);
  CHECK_THROWS_AS(total_bound(f, 7, rule), GateError);
  try {
    total_bound(f, 7, rule);
  } catch (const GateError& e) {
    CHECK(e.required_min_n == 8);
  }
  CHECK(total_bound(f, 69, rule).total >= 1.0);
  CHECK(total_bound(f, 70, rule).total < 1.0);
  const BoundReport r = total_bound(f, 1000, rule);
  CHECK(r.total == doctest::Approx(r.sum_terms()));
}

TEST_CASE("r0 override") {
  const Family f = Family::make(6, 3.0);
  const TailConstants tc = tail_constants(f, 0.1);
  CHECK(tc.r0 == 0.1);
  CHECK(tc.K == doctest::Approx(k_constant(3.0, tc.h0, 0.1, tc.H, tc.W)));
  CHECK_THROWS_AS(tail_constants(f, 1.5), InvalidArgument);
}

TEST_CASE("constants table CSV") {
  const auto rows = constants_table(1.5);
  CHECK(rows.size() == 6);
  std::ostringstream os;
  write_table_csv(os, rows);
  CHECK(os.str().rfind("family,theta,h0,r0,H,W,K,ref_r0,ref_H,ref_W,ref_K,K_rel_diff,K_ok\n4,1.5,", 0) == 0);
}

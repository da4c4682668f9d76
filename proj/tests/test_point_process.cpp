#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "steinevt/point_process.hpp"

using namespace steinevt;
using namespace steinevt::pp;

namespace {

double brute_assignment(const std::vector<double>& cost, std::size_t m) {
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double c = 0;
    for (std::size_t i = 0; i < m; ++i) c += cost[i * m + perm[i]];
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

PointConfiguration random_config(Rng& rng, std::size_t m, int dim, double spread) {
  PointConfiguration c;
  c.dim = dim;
  for (std::size_t i = 0; i < m; ++i) c.add(spread * uniform_open(rng), dim == 2 ? spread * uniform_open(rng) : 0.0);
  return c;
}

}  // namespace

TEST_CASE("d0 is the truncated Euclidean distance") {
  CHECK(d0({0, 0}, {0.3, 0.4}, 2) == doctest::Approx(0.5));
  CHECK(d0({0, 0}, {3, 4}, 2) == 1.0);
  CHECK(d0({0.2, 9}, {0.5, -9}, 1) == doctest::Approx(0.3));
}

TEST_CASE("assignment solver matches brute force") {
  Rng rng = make_rng(17);
  for (std::size_t m = 1; m <= 7; ++m)
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> cost(m * m);
      for (auto& c : cost) c = uniform_open(rng);
      std::vector<std::size_t> assign;
      const double got = min_cost_assignment(cost, m, &assign);
      CHECK(got == doctest::Approx(brute_assignment(cost, m)).epsilon(1e-12));
      std::vector<std::size_t> sorted = assign;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < m; ++i) CHECK(sorted[i] == i);
    }
}

TEST_CASE("d1 conventions") {
  PointConfiguration empty, one, two;
  one.add(0.1);
  two.add(0.1);
  two.add(0.4);
  CHECK(d1_distance(empty, empty) == 0.0);
  CHECK(d1_distance(empty, one) == 1.0);
  CHECK(d1_distance(one, two) == 1.0);
  PointConfiguration b;
  b.add(0.45);
  b.add(0.1);
  // the closest matching pairs 0.1-0.1 and 0.4-0.45: mean distance 0.025
  CHECK(d1_distance(two, b) == doctest::Approx(0.025));
  CHECK(two == PointConfiguration{1, {{0.4, 0}, {0.1, 0}}});
}

TEST_CASE("d1 equals the brute-force matching average") {
  Rng rng = make_rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t m = 1 + rep % 6;
    const auto a = random_config(rng, m, 2, 2.0), b = random_config(rng, m, 2, 2.0);
    std::vector<double> cost(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) cost[i * m + j] = d0(a.points[i], b.points[j], 2);
    CHECK(d1_distance(a, b) == doctest::Approx(brute_assignment(cost, m) / m).epsilon(1e-12));
  }
}

TEST_CASE("MPPE simulation: mean count and reproducibility") {
  const auto spec = MPPESpec::standard(dist::MarginalLaw::exponential(1.0), 1000, 0.0);
  // n P(X >= log n) = 1
  Rng rng = make_rng(5);
  const int reps = 20000;
  double total = 0;
  for (int r = 0; r < reps; ++r) total += static_cast<double>(mppe_count(spec, rng));
  CHECK(total / reps == doctest::Approx(1.0).epsilon(0.03));
  const auto c = simulate_mppe(spec, 77);
  CHECK(c == simulate_mppe(spec, 77));
  for (const auto& p : c.points) CHECK(p.x >= 0.0);
}

TEST_CASE("PRM sampling on an interval") {
  const auto spec = stein::IntensitySpec::interval(0.0, INFINITY, [](double x) { return 3.0 * std::exp(-x); });
  const LocationSampler sampler(spec);
  CHECK(sampler.total_mass() == doctest::Approx(3.0).epsilon(1e-10));
  Rng rng = make_rng(8);
  std::vector<double> xs;
  double count = 0;
  const int reps = 20000;
  for (int r = 0; r < reps; ++r) {
    const auto c = sample_prm(sampler, 1, rng);
    count += static_cast<double>(c.size());
    for (const auto& p : c.points) xs.push_back(p.x);
  }
  CHECK(count / reps == doctest::Approx(3.0).epsilon(0.02));
  // locations follow Exp(1): KS against 1 - e^{-x}
  std::sort(xs.begin(), xs.end());
  double d = 0;
  const double m = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = 1 - std::exp(-xs[i]);
    d = std::max({d, std::abs(f - i / m), std::abs((i + 1) / m - f)});
  }
  CHECK(d < 1.95 / std::sqrt(m));
}

TEST_CASE("PRM sampling on a rectangle with a diagonal part") {
  // unit density on [0,1]^2 plus mass 2 on the diagonal
  const auto spec = stein::IntensitySpec::rectangle(0, 1, 0, 1, [](double, double) { return 1.0; },
                                                    [](double) { return 2.0; });
  const LocationSampler sampler(spec);
  CHECK(sampler.total_mass() == doctest::Approx(3.0).epsilon(1e-10));
  Rng rng = make_rng(12);
  double on_diag = 0, all = 0, below_half = 0;
  for (int r = 0; r < 20000; ++r)
    for (const auto& p : sample_prm(sampler, 2, rng).points) {
      all += 1;
      on_diag += (p.x == p.y);
      below_half += (p.y < 0.5);
    }
  CHECK(on_diag / all == doctest::Approx(2.0 / 3.0).epsilon(0.02));
  CHECK(below_half / all == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("immigration-death trajectories") {
  const auto spec = stein::IntensitySpec::interval(0.0, 1.0, [](double) { return 2.0; });
  PointConfiguration init;
  init.add(0.5);
  init.add(0.25);
  const Trajectory tr = immigration_death_simulate(spec, init, 5.0, 21);
  CHECK(tr.state_at(0.0) == init);
  CHECK(tr.state_at(5.0) == tr.final_state);
  for (std::size_t i = 1; i < tr.events.size(); ++i) CHECK(tr.events[i - 1].time <= tr.events[i].time);
  // replaying to the time of any event gives the same size as counting the events
  long size = 2;
  for (const auto& e : tr.events) size += e.kind;
  CHECK(static_cast<long>(tr.final_state.size()) == size);

  std::ostringstream os;
  write_records(os, tr);
  CHECK(os.str().rfind("time,event,x\n0,init,", 0) == 0);
}

TEST_CASE("immigration-death mean follows the ODE solution") {
  // E|Z_t| = |Z_0| e^{-t} + lambda (1 - e^{-t})
  const auto spec = stein::IntensitySpec::interval(0.0, 1.0, [](double) { return 4.0; });
  const LocationSampler sampler(spec);
  PointConfiguration init;
  for (int i = 0; i < 10; ++i) init.add(0.1 * i);
  Rng rng = make_rng(99);
  const double t = 0.7;
  double s = 0;
  const int reps = 20000;
  for (int r = 0; r < reps; ++r) s += static_cast<double>(immigration_death_simulate(sampler, init, t, rng, false).final_state.size());
  CHECK(s / reps == doctest::Approx(10 * std::exp(-t) + 4 * (1 - std::exp(-t))).epsilon(0.02));
}

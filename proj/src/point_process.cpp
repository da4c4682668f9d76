#include "steinevt/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "steinevt/maxima_evt.hpp"

namespace steinevt::pp {

std::size_t PointConfiguration::count_in(const std::function<bool(const Point&)>& region) const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), region));
}

bool operator==(const PointConfiguration& a, const PointConfiguration& b) {
  if (a.dim != b.dim || a.size() != b.size()) return false;
  auto pa = a.points, pb = b.points;
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  return pa == pb;
}

double d0(const Point& a, const Point& b, int dim) {
  const double dx = a.x - b.x, dy = dim == 2 ? a.y - b.y : 0.0;
  return std::min(std::hypot(dx, dy), 1.0);
}

// Shortest augmenting path with row/column potentials (Kuhn-Munkres), O(m^3).
double min_cost_assignment(const std::vector<double>& cost, std::size_t m,
                           std::vector<std::size_t>* rows_to_cols) {
  if (cost.size() != m * m) throw InvalidArgument("cost matrix must be m x m");
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; column 0 is the virtual start
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  if (rows_to_cols) rows_to_cols->assign(m, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    total += cost[(match[j] - 1) * m + (j - 1)];
    if (rows_to_cols) (*rows_to_cols)[match[j] - 1] = j - 1;
  }
  return total;
}

double d1_distance(const PointConfiguration& a, const PointConfiguration& b) {
  if (a.size() != b.size()) return 1.0;
  if (a.empty()) return 0.0;
  const int dim = std::max(a.dim, b.dim);
  const std::size_t m = a.size();
  std::vector<double> cost(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) cost[i * m + j] = d0(a.points[i], b.points[j], dim);
  return min_cost_assignment(cost, m, nullptr) / static_cast<double>(m);
}

// ---------------------------------------------------------------------------

MPPESpec MPPESpec::standard(const dist::MarginalLaw& law, long n, double u_star) {
  if (n < 1) throw InvalidArgument("sample size must be >= 1");
  MPPESpec s;
  s.law = law;
  s.n = n;
  s.u_star = u_star;
  const double dn = static_cast<double>(n), ln = std::log(dn);
  switch (law.family) {
    case dist::Family::Exponential: s.a_n = 1.0 / law.a, s.b_n = ln / law.a; break;
    case dist::Family::Pareto: s.a_n = law.b * std::pow(dn, 1.0 / law.a), s.b_n = 0.0; break;
    case dist::Family::Uniform: s.a_n = (law.b - law.a) / dn, s.b_n = law.b; break;
    case dist::Family::StdNormal: s.a_n = maxima::normal_an(n), s.b_n = maxima::normal_bn(n); break;
    case dist::Family::StdCauchy: s.a_n = dn / std::numbers::pi, s.b_n = 0.0; break;
    case dist::Family::Geometric: {
      const double L = -std::log(law.a);
      s.a_n = 1.0 / L, s.b_n = ln / L;
      break;
    }
  }
  return s;
}

namespace {
bool in_region(const MPPESpec& s, double x) {
  switch (s.region) {
    case RegionKind::Everything: return true;
    case RegionKind::Ray: return x >= s.u_star;
    case RegionKind::Nothing: return false;
  }
  return false;
}
}  // namespace

PointConfiguration simulate_mppe(const MPPESpec& spec, Rng& rng) {
  if (!(spec.a_n > 0)) throw InvalidArgument("normalisation must be increasing");
  PointConfiguration c;
  for (long i = 0; i < spec.n; ++i) {
    const double x = (dist::draw(spec.law, rng) - spec.b_n) / spec.a_n;
    if (in_region(spec, x)) c.add(x);
  }
  return c;
}

PointConfiguration simulate_mppe(const MPPESpec& spec, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return simulate_mppe(spec, rng);
}

long mppe_count(const MPPESpec& spec, Rng& rng) {
  long w = 0;
  for (long i = 0; i < spec.n; ++i)
    if (in_region(spec, (dist::draw(spec.law, rng) - spec.b_n) / spec.a_n)) ++w;
  return w;
}

// ---------------------------------------------------------------------------

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
using G15 = boost::math::quadrature::gauss<double, 15>;

// finite right end beyond which the remaining mass is below rel * total
double cut_point(const std::function<double(double)>& f, double lo, double total, double rel) {
  double w = std::max(1.0, std::fabs(lo));
  for (int i = 0; i < 200; ++i, w *= 2.0) {
    double c = lo + w;
    if (integrate(f, c, INFINITY).value <= rel * total) return c;
  }
  throw NumericalError("intensity tail does not decay");
}

}  // namespace

LocationSampler::Table LocationSampler::tabulate(std::function<double(double)> f, double lo, double hi) {
  if (!std::isfinite(lo)) throw InvalidArgument("intensity region must have a finite left end");
  Table t;
  t.density = f;
  if (!(hi > lo)) {
    t.nodes = {lo};
    t.cum = {0.0};
    return t;
  }
  const double total = integrate(f, lo, hi).value;
  if (!(total > 0)) {
    t.nodes = {lo};
    t.cum = {0.0};
    return t;
  }
  const double right = std::isfinite(hi) ? hi : cut_point(f, lo, total, 1e-16);

  // split until every segment is small in mass and integrated to near machine precision by
  // one Gauss-Kronrod pair
  struct Seg {
    double a, b, mass;
    int depth;
  };
  std::vector<Seg> stack{{lo, right, 0.0, 0}}, done;
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    double err = 0.0;
    s.mass = GK::integrate(f, s.a, s.b, 0, 0.0, &err);
    const bool fine = s.mass <= total / 512.0 && err <= 1e-14 * total;
    if (fine || s.depth >= 60) {
      done.push_back(s);
    } else {
      const double mid = 0.5 * (s.a + s.b);
      stack.push_back({mid, s.b, 0.0, s.depth + 1});
      stack.push_back({s.a, mid, 0.0, s.depth + 1});
    }
  }
  std::sort(done.begin(), done.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
  t.nodes.push_back(lo);
  t.cum.push_back(0.0);
  for (const auto& s : done) {
    t.nodes.push_back(s.b);
    t.cum.push_back(t.cum.back() + std::max(0.0, s.mass));
  }
  return t;
}

double LocationSampler::invert(const Table& t, double target) {
  const auto& c = t.cum;
  if (c.size() < 2) throw NumericalError("sampling from an intensity with zero mass");
  target = std::clamp(target, 0.0, c.back());
  std::size_t i = static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), target) - c.begin());
  i = std::clamp<std::size_t>(i, 1, c.size() - 1) - 1;
  double a = t.nodes[i], b = t.nodes[i + 1];
  const double r = target - c[i], seg = c[i + 1] - c[i];
  if (seg <= 0) return a;
  double x = a + (b - a) * (r / seg);
  const double tol = 1e-14 * std::max(c.back(), 1e-300);
  for (int it = 0; it < 100; ++it) {
    const double g = G15::integrate(t.density, t.nodes[i], x) - r;
    if (std::fabs(g) <= tol || b - a <= 1e-15 * std::max(1.0, std::fabs(x))) break;
    if (g > 0) b = x;
    else a = x;
    const double fx = t.density(x);
    double nx = fx > 0 ? x - g / fx : 0.5 * (a + b);
    if (!(nx > a && nx < b)) nx = 0.5 * (a + b);
    x = nx;
  }
  return x;
}

LocationSampler::LocationSampler(const stein::IntensitySpec& spec) : spec_(spec) {
  for (const auto& a : spec.atoms) {
    if (a.mass < 0) throw InvalidArgument("atom masses must be nonnegative");
    atom_mass_ += a.mass;
  }
  if (spec.dim == 1) {
    if (spec.density1) {
      line_ = tabulate(spec.density1, spec.lo[0], spec.hi[0]);
      off_mass_ = line_.cum.back();
    }
  } else {
    if (spec.density2) {
      const auto f = spec.density2;
      const double lo = spec.lo[0], hi = spec.hi[0];
      auto marginal = [f, lo, hi](double t) {
        auto g = [&](double s) { return f(s, t); };
        if (t > lo && t < hi) return integrate(g, lo, t, 1e-10).value + integrate(g, t, hi, 1e-10).value;
        return integrate(g, lo, hi, 1e-10).value;
      };
      t_marg_ = tabulate(marginal, spec.lo[1], spec.hi[1]);
      off_mass_ = t_marg_.cum.back();
    }
    if (spec.diagonal && spec.diag_hi() > spec.diag_lo()) {
      line_ = tabulate(spec.diagonal, spec.diag_lo(), spec.diag_hi());
      diag_mass_ = line_.cum.back();
    }
  }
  mass_ = off_mass_ + diag_mass_ + atom_mass_;
  if (!std::isfinite(mass_)) throw InvalidArgument("intensity has infinite total mass");
}

Point LocationSampler::draw(Rng& rng) const {
  if (!(mass_ > 0)) throw NumericalError("sampling from an intensity with zero mass");
  double u = uniform_open(rng) * mass_;
  if (u < atom_mass_) {
    for (const auto& a : spec_.atoms) {
      if (u < a.mass) return {a.x, a.y};
      u -= a.mass;
    }
    return {spec_.atoms.back().x, spec_.atoms.back().y};
  }
  u -= atom_mass_;
  if (spec_.dim == 1) return {invert(line_, uniform_open(rng) * line_.cum.back()), 0.0};
  if (u < diag_mass_) {
    const double s = invert(line_, uniform_open(rng) * line_.cum.back());
    return {s, s};
  }
  const double t = invert(t_marg_, uniform_open(rng) * t_marg_.cum.back());
  // conditional law of s given t, split at the diagonal where the density may jump
  const auto& f = spec_.density2;
  auto g = [&](double s) { return f(s, t); };
  const double lo = spec_.lo[0];
  double hi = spec_.hi[0];
  auto F = [&](double s) {
    if (t > lo && s > t) return integrate(g, lo, t, 1e-11).value + integrate(g, t, s, 1e-11).value;
    return integrate(g, lo, s, 1e-11).value;
  };
  const double total = (t > lo && t < hi) ? integrate(g, lo, t, 1e-11).value + integrate(g, t, hi, 1e-11).value
                                          : integrate(g, lo, hi, 1e-11).value;
  if (!std::isfinite(hi)) hi = std::max(t, lo) + std::max(1.0, std::fabs(lo));
  while (F(hi) < total * (1.0 - 1e-15) && std::isfinite(hi)) hi = lo + 2.0 * (hi - lo);
  const double w = uniform_open(rng) * total;
  // F' = g, so bracketed Newton converges in a handful of quadratures
  std::uintmax_t iters = 60;
  const double s = boost::math::tools::newton_raphson_iterate(
      [&](double x) { return std::make_pair(F(x) - w, g(x)); }, 0.5 * (lo + hi), lo, hi, 40, iters);
  return {s, t};
}

PointConfiguration sample_prm(const LocationSampler& sampler, int dim, Rng& rng) {
  PointConfiguration c;
  c.dim = dim;
  if (sampler.total_mass() <= 0) return c;
  std::poisson_distribution<long> count(sampler.total_mass());
  const long k = count(rng);
  for (long i = 0; i < k; ++i) c.points.push_back(sampler.draw(rng));
  return c;
}

PointConfiguration sample_prm(const stein::IntensitySpec& intensity, Rng& rng) {
  return sample_prm(LocationSampler(intensity), intensity.dim, rng);
}

PointConfiguration sample_prm(const stein::IntensitySpec& intensity, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_prm(intensity, rng);
}

// ---------------------------------------------------------------------------

Trajectory immigration_death_simulate(const LocationSampler& sampler, const PointConfiguration& initial,
                                      double horizon, Rng& rng, bool record) {
  if (!(horizon >= 0)) throw InvalidArgument("horizon must be nonnegative");
  Trajectory tr;
  tr.horizon = horizon;
  if (record) tr.initial = initial;
  std::vector<Point> state = initial.points;
  const double lambda = sampler.total_mass();
  double t = 0.0;
  for (;;) {
    const double rate = static_cast<double>(state.size()) + lambda;
    if (rate <= 0) break;
    t += -std::log(uniform_open(rng)) / rate;
    if (t > horizon) break;
    if (uniform_open(rng) * rate < lambda) {
      const Point p = sampler.draw(rng);
      state.push_back(p);
      if (record) tr.events.push_back({t, +1, p});
    } else {
      const std::size_t i = std::min(state.size() - 1,
                                     static_cast<std::size_t>(uniform_open(rng) * static_cast<double>(state.size())));
      if (record) tr.events.push_back({t, -1, state[i]});
      state[i] = state.back();
      state.pop_back();
    }
  }
  tr.final_state.dim = initial.dim;
  tr.final_state.points = std::move(state);
  return tr;
}

Trajectory immigration_death_simulate(const stein::IntensitySpec& intensity,
                                      const PointConfiguration& initial, double horizon, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  LocationSampler sampler(intensity);
  return immigration_death_simulate(sampler, initial, horizon, rng, true);
}

PointConfiguration Trajectory::state_at(double t) const {
  PointConfiguration c = initial;
  for (const auto& e : events) {
    if (e.time > t) break;
    if (e.kind > 0) {
      c.points.push_back(e.point);
    } else {
      auto it = std::find(c.points.begin(), c.points.end(), e.point);
      if (it == c.points.end()) throw NumericalError("trajectory removes a point that is not present");
      c.points.erase(it);
    }
  }
  return c;
}

void write_configuration(std::ostream& os, const PointConfiguration& c) {
  os << (c.dim == 2 ? "x,y\n" : "x\n");
  char buf[64];
  for (const auto& p : c.points) {
    if (c.dim == 2) std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
    else std::snprintf(buf, sizeof buf, "%.17g\n", p.x);
    os << buf;
  }
}

void write_records(std::ostream& os, const Trajectory& tr) {
  const int dim = tr.initial.dim;
  os << (dim == 2 ? "time,event,x,y\n" : "time,event,x\n");
  char buf[96];
  auto line = [&](double t, const char* kind, const Point& p) {
    if (dim == 2) std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g\n", t, kind, p.x, p.y);
    else std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g\n", t, kind, p.x);
    os << buf;
  };
  for (const auto& p : tr.initial.points) line(0.0, "init", p);
  for (const auto& e : tr.events) line(e.time, e.kind > 0 ? "immigration" : "death", e.point);
}

}  // namespace steinevt::pp

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "steinevt/distributions.hpp"
#include "steinevt/rng.hpp"
#include "steinevt/stein_bounds.hpp"

namespace steinevt::pp {

struct Point {
  double x = 0.0, y = 0.0;
  bool operator<(const Point& o) const { return x < o.x || (x == o.x && y < o.y); }
  bool operator==(const Point& o) const { return x == o.x && y == o.y; }
};

/// Finite point measure sum_i delta_{z_i} on R^dim; repeated points count with multiplicity.
struct PointConfiguration {
  int dim = 1;
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  void add(double x, double y = 0.0) { points.push_back({x, y}); }
  std::size_t count_in(const std::function<bool(const Point&)>& region) const;
};

/// Equality as multisets.
bool operator==(const PointConfiguration& a, const PointConfiguration& b);

/// min(Euclidean distance, 1).
double d0(const Point& a, const Point& b, int dim);

/// Minimum-cost perfect matching on a square cost matrix (row-major, size m*m).  Returns the
/// optimal cost and writes the column assigned to each row.
double min_cost_assignment(const std::vector<double>& cost, std::size_t m, std::vector<std::size_t>* rows_to_cols);

/// 1 when the cardinalities differ, 0 for two empty configurations, otherwise the average
/// d0 distance under the closest matching.
double d1_distance(const PointConfiguration& a, const PointConfiguration& b);

// ---------------------------------------------------------------------------

enum class RegionKind { Everything, Ray, Nothing };

/// i.i.d. marks from `law`, normalised as x = (y - b_n)/a_n, kept when they fall in the region
/// ([u_star, inf) for Ray).
struct MPPESpec {
  dist::MarginalLaw law;
  long n = 1;
  RegionKind region = RegionKind::Ray;
  double u_star = 0.0;
  double a_n = 1.0, b_n = 0.0;

  /// Norming constants of the corresponding maxima result (uniform with index 1).
  static MPPESpec standard(const dist::MarginalLaw& law, long n, double u_star);
};

PointConfiguration simulate_mppe(const MPPESpec& spec, Rng& rng);
PointConfiguration simulate_mppe(const MPPESpec& spec, std::uint64_t seed);
/// W_A only, without storing locations.
long mppe_count(const MPPESpec& spec, Rng& rng);

// ---------------------------------------------------------------------------

/// Draws locations from the normalised intensity lambda / |lambda|.  One-dimensional densities
/// are inverted through a table of cumulative masses followed by safeguarded Newton steps;
/// two-dimensional ones pick the off-diagonal part, the diagonal or an atom in proportion to
/// their masses, then invert the t-marginal and the conditional law of s given t.
class LocationSampler {
 public:
  explicit LocationSampler(const stein::IntensitySpec& spec);
  double total_mass() const { return mass_; }
  Point draw(Rng& rng) const;

 private:
  struct Table {
    std::vector<double> nodes, cum;  // cum[i] = integral over [nodes[0], nodes[i]]
    std::function<double(double)> density;
  };
  static Table tabulate(std::function<double(double)> f, double lo, double hi);
  static double invert(const Table& t, double target);

  stein::IntensitySpec spec_;
  double mass_ = 0.0, off_mass_ = 0.0, diag_mass_ = 0.0, atom_mass_ = 0.0;
  Table line_;   // 1-D density, or the diagonal
  Table t_marg_; // t-marginal of the off-diagonal density
};

PointConfiguration sample_prm(const stein::IntensitySpec& intensity, Rng& rng);
PointConfiguration sample_prm(const stein::IntensitySpec& intensity, std::uint64_t seed);
PointConfiguration sample_prm(const LocationSampler& sampler, int dim, Rng& rng);

// ---------------------------------------------------------------------------

struct Event {
  double time = 0.0;
  int kind = +1;  // +1 immigration, -1 death
  Point point;
};

struct Trajectory {
  PointConfiguration initial;
  std::vector<Event> events;
  double horizon = 0.0;
  PointConfiguration final_state;

  /// Configuration at time t, replaying the event list.
  PointConfiguration state_at(double t) const;
};

/// Event-driven immigration-death simulation: holding time Exp(|xi| + lambda); with
/// probability lambda/(|xi| + lambda) a point immigrates at a location drawn from
/// lambda(.)/lambda, otherwise a uniformly chosen point dies.  With record = false only the
/// final state is kept.
Trajectory immigration_death_simulate(const LocationSampler& sampler, const PointConfiguration& initial,
                                      double horizon, Rng& rng, bool record = true);
Trajectory immigration_death_simulate(const stein::IntensitySpec& intensity,
                                      const PointConfiguration& initial, double horizon,
                                      std::uint64_t seed);

/// Line records "time,event,x[,y]" with a header row; the initial configuration is written
/// as events of kind "init" at time 0.
void write_records(std::ostream& os, const Trajectory& tr);
void write_configuration(std::ostream& os, const PointConfiguration& c);

}  // namespace steinevt::pp

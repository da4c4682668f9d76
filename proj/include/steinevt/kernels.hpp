#pragma once

// Replicate-level and grid-level loops, each in a serial reference form and an OpenMP
// form.  Per-replicate RNG streams are derived from (seed, replicate index), and every
// reduction is either integer-valued or a max with index tie-breaking, so both forms
// return identical results.

#include <cstdint>
#include <functional>
#include <vector>

#include "steinevt/point_process.hpp"
#include "steinevt/stein_bounds.hpp"

namespace steinevt {

enum class Exec { Serial, Parallel };

struct GridMax {
  double value = 0.0;
  std::size_t index = 0;
};

/// max_i |f(x_i) - g(x_i)|, ties resolved towards the smaller index.
GridMax grid_abs_diff_max(const std::vector<double>& x, const std::function<double(double)>& f,
                          const std::function<double(double)>& g, Exec exec);

/// Histogram of a nonnegative integer statistic over `reps` replicates; replicate r runs
/// with its own generator seeded by stream_seed(seed, r).
std::vector<long> replicate_histogram(long reps, std::uint64_t seed,
                                      const std::function<long(Rng&)>& statistic, Exec exec);

/// Counts |Z_T| of an immigration-death process started from `initial`, at horizon T.
std::vector<long> immigration_death_counts(const stein::IntensitySpec& intensity,
                                           const pp::PointConfiguration& initial, double horizon,
                                           long reps, std::uint64_t seed, Exec exec);

/// Empirical pmf of a histogram.
std::vector<double> normalise(const std::vector<long>& hist);

/// Total variation between an empirical pmf and Poisson(lambda).
double dtv_empirical_poisson(const std::vector<double>& pmf, double lambda);

}  // namespace steinevt

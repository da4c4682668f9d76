#include "steinevt/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace steinevt {

namespace {

bool better(const GridMax& a, const GridMax& b) {
  return a.value > b.value || (a.value == b.value && a.index < b.index);
}

GridMax grid_max_serial(const std::vector<double>& x, const std::function<double(double)>& f,
                        const std::function<double(double)>& g) {
  GridMax best{-1.0, 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    GridMax c{std::fabs(f(x[i]) - g(x[i])), i};
    if (better(c, best)) best = c;
  }
  return best;
}

GridMax grid_max_omp(const std::vector<double>& x, const std::function<double(double)>& f,
                     const std::function<double(double)>& g) {
  const long m = static_cast<long>(x.size());
  GridMax best{-1.0, 0};
#pragma omp parallel
  {
    GridMax local{-1.0, 0};
#pragma omp for schedule(static) nowait
    for (long i = 0; i < m; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      GridMax c{std::fabs(f(x[k]) - g(x[k])), k};
      if (better(c, local)) local = c;
    }
#pragma omp critical(steinevt_grid_max)
    if (better(local, best)) best = local;
  }
  return best;
}

void merge_into(std::vector<long>& into, const std::vector<long>& from) {
  if (from.size() > into.size()) into.resize(from.size(), 0);
  for (std::size_t k = 0; k < from.size(); ++k) into[k] += from[k];
}

}  // namespace

GridMax grid_abs_diff_max(const std::vector<double>& x, const std::function<double(double)>& f,
                          const std::function<double(double)>& g, Exec exec) {
  if (x.empty()) throw InvalidArgument("empty grid");
  return exec == Exec::Serial ? grid_max_serial(x, f, g) : grid_max_omp(x, f, g);
}

std::vector<long> replicate_histogram(long reps, std::uint64_t seed, const std::function<long(Rng&)>& statistic,
                                      Exec exec) {
  if (reps < 0) throw InvalidArgument("replicate count must be nonnegative");
  std::vector<long> hist;
  if (exec == Exec::Serial) {
    for (long r = 0; r < reps; ++r) {
      Rng rng = make_rng(seed, static_cast<std::uint64_t>(r));
      const long k = statistic(rng);
      if (k < 0) throw InvalidArgument("statistic must be nonnegative");
      if (static_cast<std::size_t>(k) >= hist.size()) hist.resize(k + 1, 0);
      ++hist[k];
    }
    return hist;
  }
  bool negative = false;
#pragma omp parallel
  {
    std::vector<long> local;
#pragma omp for schedule(dynamic, 64) nowait
    for (long r = 0; r < reps; ++r) {
      Rng rng = make_rng(seed, static_cast<std::uint64_t>(r));
      const long k = statistic(rng);
      if (k < 0) {
        negative = true;
        continue;
      }
      if (static_cast<std::size_t>(k) >= local.size()) local.resize(k + 1, 0);
      ++local[k];
    }
    // integer counts: the merge order does not affect the result
#pragma omp critical(steinevt_hist_merge)
    merge_into(hist, local);
  }
  if (negative) throw InvalidArgument("statistic must be nonnegative");
  return hist;
}

std::vector<long> immigration_death_counts(const stein::IntensitySpec& intensity,
                                           const pp::PointConfiguration& initial, double horizon, long reps,
                                           std::uint64_t seed, Exec exec) {
  const pp::LocationSampler sampler(intensity);
  return replicate_histogram(
      reps, seed,
      [&](Rng& rng) {
        auto tr = pp::immigration_death_simulate(sampler, initial, horizon, rng, false);
        return static_cast<long>(tr.final_state.size());
      },
      exec);
}

std::vector<double> normalise(const std::vector<long>& hist) {
  long total = 0;
  for (long h : hist) total += h;
  std::vector<double> p(hist.size(), 0.0);
  if (total == 0) return p;
  for (std::size_t k = 0; k < hist.size(); ++k) p[k] = static_cast<double>(hist[k]) / static_cast<double>(total);
  return p;
}

double dtv_empirical_poisson(const std::vector<double>& pmf, double lambda) {
  const long M = std::max(static_cast<long>(pmf.size()), stein::chernoff_index(lambda, 1e-16));
  auto emp = [&](long k) { return k < static_cast<long>(pmf.size()) ? pmf[static_cast<std::size_t>(k)] : 0.0; };
  return stein::exact_dtv_pmf(emp, [&](long k) { return stein::poisson_pmf(lambda, k); }, M, 1e-12).value;
}

}  // namespace steinevt

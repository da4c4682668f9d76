// steinevt: batch front-end for bound reports, oracle checks, constant tables and simulations.
//
//   steinevt bound    --law exponential --n 100 [--stage a] [--u -1]
//   steinevt bound    --arch 4 --theta 1.5 --s sqrtlog --n 50 [--r0 0.1]
//   steinevt bound    --mogeo --gamma 1 --delta 1 --p11 0.01 --u -1 [--n 100]
//   steinevt verify   binomial | maxima --law L | imm-death --lambda 2 --seed 1 | mogeo
//   steinevt table    archimedean --theta 3 | tail-dependence
//   steinevt simulate mppe | imm-death | copula | mogeo-counts  (all need --seed)
//
// Exit codes: 0 ok, 2 an oracle exceeded its bound, 3 bad configuration, 4 gate or numerical
// validity failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steinevt/archimedean_tail.hpp"
#include "steinevt/copulas.hpp"
#include "steinevt/distributions.hpp"
#include "steinevt/kernels.hpp"
#include "steinevt/maxima_evt.hpp"
#include "steinevt/mo_geometric.hpp"
#include "steinevt/point_process.hpp"
#include "steinevt/report.hpp"
#include "steinevt/stein_bounds.hpp"

using namespace steinevt;
using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kViolation = 2, kConfig = 3, kGate = 4;

struct Options {
  // shared
  std::string out, format;
  std::optional<std::uint64_t> seed;
  std::vector<long> n{100};
  // marginal laws
  std::string law, stage = "a", u;
  std::optional<double> alpha;  // Pareto or stage index (default 1), MO alpha (default 0.5)
  double rate = 1.0, scale = 1.0, lo = 0.0, hi = 1.0, q = 0.5;
  // Archimedean
  int arch = 0;
  double theta = 1.5;
  std::string s, t;
  std::optional<double> r0;
  // MO geometric
  bool mogeo = false;
  double gamma = 1.0, delta = 1.0, p11 = 0.01;
  // binomial and simulation
  double p = 0.1, lambda = 1.0, horizon = 12.0, tol = 0.02;
  long reps = 10000, count = 3000;
  std::string copula = "marshall-olkin";
  double beta = 0.5;
  std::string target;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file " + o.out);
  f << text;
}

bool want_csv(const Options& o, bool csv_default) {
  if (o.format.empty()) return csv_default;
  if (o.format == "csv") return true;
  if (o.format == "json") return false;
  throw InvalidArgument("--format must be json or csv");
}

std::uint64_t need_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("STEINEVT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidArgument("STEINEVT_SEED is not an unsigned integer");
    }
  }
  throw InvalidArgument("stochastic commands need --seed (or STEINEVT_SEED)");
}

dist::MarginalLaw make_law(const Options& o) {
  switch (dist::family_from_name(o.law)) {
    case dist::Family::Exponential: return dist::MarginalLaw::exponential(o.rate);
    case dist::Family::Pareto: return dist::MarginalLaw::pareto(o.alpha.value_or(1.0), o.scale);
    case dist::Family::Uniform: return dist::MarginalLaw::uniform(o.lo, o.hi);
    case dist::Family::StdNormal: return dist::MarginalLaw::std_normal();
    case dist::Family::StdCauchy: return dist::MarginalLaw::std_cauchy();
    case dist::Family::Geometric: return dist::MarginalLaw::geometric(o.q);
  }
  throw InvalidArgument("unknown law");
}

// "loglog" stands for u* = -log log n
double parse_threshold(const std::string& u, long n) {
  if (u == "loglog") return -std::log(std::log(static_cast<double>(n)));
  try {
    std::size_t used = 0;
    const double v = std::stod(u, &used);
    if (used != u.size()) throw std::invalid_argument(u);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("threshold must be a number or 'loglog', got '" + u + "'");
  }
}

arch::ThresholdRule parse_rule(const Options& o) {
  arch::ThresholdRule rule;
  if (o.s.empty()) throw InvalidArgument("Archimedean bounds need --s (a number or 'sqrtlog')");
  if (o.s == "sqrtlog") {
    if (!o.t.empty() && o.t != "sqrtlog") throw InvalidArgument("--t must match --s sqrtlog");
    rule.sqrt_log = true;
    return rule;
  }
  rule.s = parse_threshold(o.s, 2);
  rule.t = o.t.empty() ? rule.s : parse_threshold(o.t, 2);
  return rule;
}

std::string report_text(const Options& o, const BoundReport& r) {
  return want_csv(o, false) ? to_csv(r) : to_json(r).dump(2) + "\n";
}

std::string rows_text(const Options& o, const std::string& command, const std::string& target,
                      const std::vector<std::string>& columns, const std::vector<std::vector<json>>& rows, bool pass) {
  if (want_csv(o, true)) {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        os << (i ? "," : "");
        if (row[i].is_string()) os << row[i].get<std::string>();
        else os << row[i].dump();
      }
      os << '\n';
    }
    return os.str();
  }
  json j;
  j["schema"] = 1;
  j["command"] = command;
  j["target"] = target;
  json arr = json::array();
  for (const auto& row : rows) {
    json obj;
    for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
    arr.push_back(obj);
  }
  j["rows"] = arr;
  j["all_pass"] = pass;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

int cmd_bound(const Options& o) {
  const int modes = (!o.law.empty()) + (o.arch != 0) + (o.mogeo ? 1 : 0);
  if (modes != 1) throw InvalidArgument("bound needs exactly one of --law, --arch, --mogeo");
  const long n = o.n.front();
  BoundReport r;
  if (!o.law.empty() && o.law == "binomial") {
    r = stein::binomial_poisson_report(n, o.p);
  } else if (!o.law.empty()) {
    const dist::MarginalLaw law = make_law(o);
    if (!o.u.empty()) {
      r = maxima::mppe_report(law, n, parse_threshold(o.u, n));
    } else {
      if (o.stage.size() != 1) throw InvalidArgument("--stage takes a single letter");
      r = maxima::max_bound({law, n, o.stage[0], o.alpha.value_or(1.0)});
    }
  } else if (o.arch != 0) {
    const arch::Family f = arch::Family::make(o.arch, o.theta);
    r = arch::total_bound(f, n, parse_rule(o), arch::tail_constants(f, o.r0));
  } else {
    const double u = o.u.empty() ? 0.0 : parse_threshold(o.u, n);
    r = mogeo::bound_ledger(mogeo::Scenario::from_gamma_delta(o.gamma, o.delta, o.p11, n, u));
  }
  emit(o, report_text(o, r));
  return kOk;
}

int verify_binomial(const Options& o) {
  std::vector<std::vector<json>> rows;
  bool pass = true;
  for (long n : {5L, 10L, 50L, 200L})
    for (double p : {0.01, 0.05, 0.1, 0.3}) {
      const BoundReport r = stein::binomial_poisson_report(n, p);
      const double exact = *r.oracle, bh = r.total, lc = r.meta.at("lecam");
      const bool ok = exact <= bh && bh <= lc;
      pass = pass && ok;
      rows.push_back({n, p, exact, bh, lc, bh - exact, ok});
    }
  emit(o, rows_text(o, "verify", "binomial", {"n", "p", "exact_dtv", "barbour_hall", "le_cam", "margin", "pass"}, rows,
                    pass));
  return pass ? kOk : kViolation;
}

int verify_maxima(const Options& o) {
  if (o.law.empty()) throw InvalidArgument("verify maxima needs --law");
  const dist::MarginalLaw law = make_law(o);
  std::vector<long> ns = o.n;
  if (ns.size() == 1 && ns.front() == 100) ns = {25, 100, 1000};
  std::vector<std::vector<json>> rows;
  bool pass = true;
  for (long n : ns) {
    const BoundReport r = maxima::max_bound_verified({law, n, o.stage.at(0), o.alpha.value_or(1.0)}, Exec::Parallel);
    const bool ok = *r.oracle <= r.total;
    pass = pass && ok;
    rows.push_back({o.law, n, o.stage, *r.oracle, r.total, r.total - *r.oracle, ok});
  }
  emit(o, rows_text(o, "verify", "maxima", {"law", "n", "stage", "oracle", "bound", "margin", "pass"}, rows, pass));
  return pass ? kOk : kViolation;
}

int verify_imm_death(const Options& o) {
  const std::uint64_t seed = need_seed(o);
  if (!(o.lambda > 0)) throw InvalidArgument("--lambda must be positive");
  const double lam = o.lambda;
  const auto spec = stein::IntensitySpec::interval(0.0, INFINITY, [lam](double x) { return lam * std::exp(-x); });
  const auto hist = immigration_death_counts(spec, pp::PointConfiguration{}, o.horizon, o.reps, seed, Exec::Parallel);
  const double mean = lam * -std::expm1(-o.horizon);
  const double d = dtv_empirical_poisson(normalise(hist), mean);
  const bool ok = d <= o.tol;
  emit(o, rows_text(o, "verify", "imm-death", {"lambda", "horizon", "reps", "poisson_mean", "empirical_dtv", "tolerance", "pass"},
                    {{lam, o.horizon, o.reps, mean, d, o.tol, ok}}, ok));
  return ok ? kOk : kViolation;
}

int verify_mogeo(const Options& o) {
  const long n = o.n.front();
  const double u = o.u.empty() ? -std::log(static_cast<double>(n)) : parse_threshold(o.u, n);
  const auto sc = mogeo::Scenario::from_gamma_delta(o.gamma, o.delta, o.p11, n, u);
  const long k0 = mogeo::lattice_index(sc, mogeo::a_tilde_corner(sc));
  std::vector<std::pair<long, long>> cells;
  for (long i = 0; i < 4; ++i)
    for (long j = 0; j < 4; ++j) cells.push_back({k0 + 3 * i, k0 + 3 * j});
  std::vector<std::vector<json>> rows;
  bool pass = true;
  for (const auto& c : mogeo::rectangle_consistency(sc, cells)) {
    const bool ok = c.rel_diff <= 1e-9;
    pass = pass && ok;
    rows.push_back({c.k, c.l, c.lattice, c.constructed, c.rel_diff, ok});
  }
  const auto ineq = mogeo::exponent_inequalities(o.gamma, o.delta, o.p11);
  pass = pass && ineq.all();
  emit(o, rows_text(o, "verify", "mogeo", {"k", "l", "lattice_mass", "constructed_mass", "rel_diff", "pass"}, rows, pass));
  return pass ? kOk : kViolation;
}

int cmd_verify(const Options& o) {
  if (o.target == "binomial") return verify_binomial(o);
  if (o.target == "maxima") return verify_maxima(o);
  if (o.target == "imm-death") return verify_imm_death(o);
  if (o.target == "mogeo") return verify_mogeo(o);
  throw InvalidArgument("verify target must be binomial, maxima, imm-death or mogeo");
}

int cmd_table(const Options& o) {
  if (o.target == "archimedean") {
    const auto rows = arch::constants_table(o.theta);
    if (want_csv(o, true)) {
      std::ostringstream os;
      arch::write_table_csv(os, rows);
      emit(o, os.str());
    } else {
      json j;
      j["schema"] = 1;
      j["table"] = "archimedean-constants";
      j["theta"] = o.theta;
      json arr = json::array();
      for (const auto& r : rows) {
        json e{{"family", r.id}, {"h0", r.computed.h0}, {"r0", r.computed.r0}, {"H", r.computed.H},
               {"W", r.computed.W}, {"K", r.computed.K}};
        if (r.ref_K) e["ref_K"] = *r.ref_K, e["K_ok"] = r.k_within_tolerance;
        arr.push_back(e);
      }
      j["rows"] = arr;
      emit(o, j.dump(2) + "\n");
    }
    return kOk;
  }
  if (o.target == "tail-dependence") {
    const std::vector<cop::Copula> cs{cop::Copula::independence(), cop::Copula::comonotonic(),
                                      cop::Copula::countermonotonic(), cop::Copula::gumbel(o.theta),
                                      cop::Copula::clayton(o.theta), cop::Copula::marshall_olkin(o.alpha.value_or(0.5), o.beta)};
    std::vector<std::vector<json>> rows;
    for (const auto& c : cs) {
      const auto td = cop::tail_dependence(c);
      rows.push_back({c.name(), td.lower ? json(*td.lower) : json("undefined"), *td.upper});
    }
    emit(o, rows_text(o, "table", "tail-dependence", {"copula", "lambda_lower", "lambda_upper"}, rows, true));
    return kOk;
  }
  throw InvalidArgument("table target must be archimedean or tail-dependence");
}

cop::Copula make_copula(const Options& o) {
  if (o.copula == "independence") return cop::Copula::independence();
  if (o.copula == "comonotonic") return cop::Copula::comonotonic();
  if (o.copula == "countermonotonic") return cop::Copula::countermonotonic();
  if (o.copula == "gumbel") return cop::Copula::gumbel(o.theta);
  if (o.copula == "clayton") return cop::Copula::clayton(o.theta);
  if (o.copula == "marshall-olkin" || o.copula == "mo") return cop::Copula::marshall_olkin(o.alpha.value_or(0.5), o.beta);
  throw InvalidArgument("unknown copula " + o.copula);
}

int cmd_simulate(const Options& o) {
  const std::uint64_t seed = need_seed(o);
  const long n = o.n.front();
  std::ostringstream os;
  char buf[128];
  if (o.target == "mppe") {
    if (o.law.empty()) throw InvalidArgument("simulate mppe needs --law");
    const double u = o.u.empty() ? -std::log(std::log(static_cast<double>(n))) : parse_threshold(o.u, n);
    const auto spec = pp::MPPESpec::standard(make_law(o), n, u);
    pp::write_configuration(os, pp::simulate_mppe(spec, seed));
  } else if (o.target == "mppe-counts") {
    if (o.law.empty()) throw InvalidArgument("simulate mppe-counts needs --law");
    const double u = o.u.empty() ? -std::log(std::log(static_cast<double>(n))) : parse_threshold(o.u, n);
    const auto spec = pp::MPPESpec::standard(make_law(o), n, u);
    const auto hist = replicate_histogram(o.reps, seed, [&](Rng& rng) { return pp::mppe_count(spec, rng); }, Exec::Parallel);
    os << "count,frequency\n";
    for (std::size_t k = 0; k < hist.size(); ++k) os << k << ',' << hist[k] << '\n';
  } else if (o.target == "imm-death") {
    const double lam = o.lambda;
    if (!(lam > 0)) throw InvalidArgument("--lambda must be positive");
    const auto spec = stein::IntensitySpec::interval(0.0, INFINITY, [lam](double x) { return lam * std::exp(-x); });
    pp::write_records(os, pp::immigration_death_simulate(spec, pp::PointConfiguration{}, o.horizon, seed));
  } else if (o.target == "copula") {
    os << "u,v\n";
    for (const auto& [u, v] : cop::sample_copula(make_copula(o), seed, static_cast<std::size_t>(o.count))) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u, v);
      os << buf;
    }
  } else if (o.target == "mogeo-counts") {
    const double u = o.u.empty() ? -std::log(std::log(static_cast<double>(n))) : parse_threshold(o.u, n);
    const auto sc = mogeo::Scenario::from_gamma_delta(o.gamma, o.delta, o.p11, n, u);
    const auto hist = replicate_histogram(o.reps, seed, [&](Rng& rng) { return mogeo::simulate_count(sc, rng); }, Exec::Parallel);
    os << "count,frequency\n";
    for (std::size_t k = 0; k < hist.size(); ++k) os << k << ',' << hist[k] << '\n';
  } else {
    throw InvalidArgument("simulate target must be mppe, mppe-counts, imm-death, copula or mogeo-counts");
  }
  emit(o, os.str());
  return kOk;
}

void add_common(CLI::App* c, Options& o) {
  c->add_option("--out", o.out, "output file (default stdout)");
  c->add_option("--format", o.format, "json or csv");
  c->add_option("--seed", o.seed, "random seed");
  c->add_option("--n", o.n, "sample size(s), comma separated")->delimiter(',');
  c->add_option("--law", o.law, "exponential, pareto, uniform, normal, cauchy, geometric, binomial");
  c->add_option("--stage", o.stage, "approximation stage letter");
  c->add_option("--u", o.u, "threshold u* (number or 'loglog')");
  c->add_option("--rate", o.rate, "exponential rate");
  c->add_option("--alpha", o.alpha, "Pareto index, Weibull index or MO alpha");
  c->add_option("--scale", o.scale, "Pareto scale");
  c->add_option("--lo", o.lo, "uniform lower end");
  c->add_option("--hi", o.hi, "uniform upper end");
  c->add_option("--q", o.q, "geometric failure probability");
  c->add_option("--p", o.p, "binomial success probability");
  c->add_option("--arch", o.arch, "Archimedean family id");
  c->add_option("--theta", o.theta, "copula parameter");
  c->add_option("--s", o.s, "threshold s_n (number or 'sqrtlog')");
  c->add_option("--t", o.t, "threshold t_n (defaults to --s)");
  c->add_option("--r0", o.r0, "override for r0");
  c->add_flag("--mogeo", o.mogeo, "Marshall-Olkin geometric ledger");
  c->add_option("--gamma", o.gamma, "p10 / p11");
  c->add_option("--delta", o.delta, "p01 / p11");
  c->add_option("--p11", o.p11, "joint success probability");
  c->add_option("--lambda", o.lambda, "immigration intensity total");
  c->add_option("--horizon", o.horizon, "simulation horizon");
  c->add_option("--tol", o.tol, "verification tolerance");
  c->add_option("--reps", o.reps, "replicates");
  c->add_option("--count", o.count, "number of draws");
  c->add_option("--copula", o.copula, "copula family");
  c->add_option("--beta", o.beta, "MO beta");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson and point-process approximation bounds for extremes"};
  app.require_subcommand(1);
  Options o;
  auto* bound = app.add_subcommand("bound", "compute a bound report");
  auto* verify = app.add_subcommand("verify", "run an oracle against its bound");
  auto* table = app.add_subcommand("table", "reproduce a constant table");
  auto* simulate = app.add_subcommand("simulate", "write simulation data");
  for (auto* c : {bound, verify, table, simulate}) add_common(c, o);
  for (auto* c : {verify, table, simulate}) c->add_option("target", o.target, "what to run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (bound->parsed()) return cmd_bound(o);
    if (verify->parsed()) return cmd_verify(o);
    if (table->parsed()) return cmd_table(o);
    return cmd_simulate(o);
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const GateError& e) {
    std::cerr << "gate: " << e.what() << '\n';
    return kGate;
  } catch (const NumericalError& e) {
    std::cerr << "numerical: " << e.what() << '\n';
    return kGate;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }
}

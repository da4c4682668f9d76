#include "steinevt/archimedean_tail.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "steinevt/copulas.hpp"

namespace steinevt::arch {

namespace {

// N(x) = sum_{j>=1} c_j x^j for the three building blocks used by the families:
//   Log       N = -log(1-x)           c_j = 1/j
//   PowDown   N = 1 - (1-x)^a         c_1 = a, c_{j+1} = c_j (j-a)/(j+1)
//   PowUp     N = (1-x)^(-a) - 1      c_1 = a, c_{j+1} = c_j (j+a)/(j+1)
enum class Block { Log, PowDown, PowUp };

struct Ratio {
  double R, dR, d2R;  // R(x) = N(x)/x and its first two derivatives
};

Ratio ratio_series(Block b, double a, double x) {
  double c = b == Block::Log ? 1.0 : a;
  double R = 0.0, dR = 0.0, d2R = 0.0;
  double p1 = 1.0, p2 = 0.0, p3 = 0.0;  // x^(j-1), x^(j-2), x^(j-3)
  for (int j = 1; j <= 200; ++j) {
    R += c * p1;
    dR += (j - 1) * c * p2;
    d2R += (j - 1) * (j - 2) * c * p3;
    if (j > 3 && std::fabs(c * p1) < 1e-18 * std::fabs(R)) break;
    p3 = p2, p2 = p1, p1 *= x;
    if (b == Block::Log) c = 1.0 / (j + 1);
    else if (b == Block::PowDown) c *= (j - a) / (j + 1);
    else c *= (j + a) / (j + 1);
  }
  return {R, dR, d2R};
}

Ratio ratio(Block b, double a, double x) {
  if (x < 0.25) return ratio_series(b, a, x);
  const double l1 = std::log1p(-x);
  double N, dN, d2N;
  switch (b) {
    case Block::Log:
      N = -l1, dN = 1.0 / (1.0 - x), d2N = dN * dN;
      break;
    case Block::PowDown:
      N = -std::expm1(a * l1), dN = a * std::pow(1.0 - x, a - 1.0), d2N = a * (1.0 - a) * std::pow(1.0 - x, a - 2.0);
      break;
    default:
      N = std::expm1(-a * l1), dN = a * std::pow(1.0 - x, -a - 1.0), d2N = a * (a + 1.0) * std::pow(1.0 - x, -a - 2.0);
  }
  return {N / x, dN / x - N / (x * x), d2N / x - 2.0 * dN / (x * x) + 2.0 * N / (x * x * x)};
}

void check_r(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw InvalidArgument("generator argument must lie in [0, 1)");
}

// h, h' and r h'' assembled into w, w', w''.
Derivatives assemble(double r, double h, double dh, double r_d2h) {
  return {h, dh, r * h, h + r * dh, 2.0 * dh + r_d2h};
}

// h(r) = P(r^theta)^(1/theta) with P = N/x, families 6 and 21.
Derivatives composite(Block b, double a, double theta, double r) {
  const double x = std::pow(r, theta);
  const Ratio p = ratio(b, a, x);
  const double it = 1.0 / theta;
  const double h = std::pow(p.R, it);
  const double A = std::pow(p.R, it - 1.0) * p.dR;
  const double rt1 = std::pow(r, theta - 1.0);
  const double dh = A * rt1;
  const double bracket = (it - 1.0) * std::pow(p.R, it - 2.0) * p.dR * p.dR + std::pow(p.R, it - 1.0) * p.d2R;
  const double r_d2h = (theta - 1.0) * rt1 * A + theta * std::pow(r, 2.0 * theta - 1.0) * bracket;
  return assemble(r, h, dh, r_d2h);
}

}  // namespace

const std::vector<int>& family_ids() {
  static const std::vector<int> ids{2, 4, 6, 12, 14, 15, 21};
  return ids;
}

Family Family::make(int id, double theta) {
  const auto& ids = family_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end())
    throw InvalidArgument("unknown Archimedean family " + std::to_string(id) + " (use 2, 4, 6, 12, 14, 15, 21)");
  if (!(theta >= 1.0) || !std::isfinite(theta)) throw InvalidArgument("Archimedean parameter must satisfy theta >= 1");
  return {id, theta};
}

double phibar(const Family& f, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("generator argument must lie in [0, 1]");
  const double th = f.theta;
  switch (f.id) {
    case 2: return std::pow(r, th);
    case 4: return std::pow(-std::log1p(-r), th);
    case 6: return -std::log1p(-std::pow(r, th));
    case 12: return std::pow(r / (1.0 - r), th);
    case 14: return std::pow(std::expm1(-std::log1p(-r) / th), th);
    case 15: return std::pow(-std::expm1(std::log1p(-r) / th), th);
    case 21: return -std::expm1(std::log1p(-std::pow(r, th)) / th);
  }
  throw InvalidArgument("unknown family");
}

double phibar_inv(const Family& f, double x) {
  if (!(x >= 0.0)) throw InvalidArgument("generator inverse needs x >= 0");
  const double th = f.theta;
  const double y = std::pow(x, 1.0 / th);
  switch (f.id) {
    case 2: return x >= 1.0 ? 1.0 : y;
    case 4: return -std::expm1(-y);
    case 6: return std::pow(-std::expm1(-x), 1.0 / th);
    case 12: return y / (1.0 + y);
    case 14: return -std::expm1(-th * std::log1p(y));
    case 15: return y >= 1.0 ? 1.0 : -std::expm1(th * std::log1p(-y));
    case 21: return x >= 1.0 ? 1.0 : std::pow(-std::expm1(th * std::log1p(-x)), 1.0 / th);
  }
  throw InvalidArgument("unknown family");
}

Derivatives derivatives(const Family& f, double r) {
  check_r(r);
  const double a = 1.0 / f.theta;
  switch (f.id) {
    case 2: return assemble(r, 1.0, 0.0, 0.0);
    case 12: {
      const double g = 1.0 / (1.0 - r);
      return assemble(r, g, g * g, 2.0 * r * g * g * g);
    }
    case 4:
    case 14:
    case 15: {
      const Block b = f.id == 4 ? Block::Log : (f.id == 14 ? Block::PowUp : Block::PowDown);
      const Ratio p = ratio(b, a, r);
      return assemble(r, p.R, p.dR, r * p.d2R);
    }
    case 6: return composite(Block::Log, a, f.theta, r);
    case 21: return composite(Block::PowDown, a, f.theta, r);
  }
  throw InvalidArgument("unknown family");
}

double h0(const Family& f) {
  switch (f.id) {
    case 14:
    case 15: return 1.0 / f.theta;
    case 21: return std::pow(1.0 / f.theta, 1.0 / f.theta);
    default: return 1.0;
  }
}

double theta_tilde(const Family& f, double* spread) {
  std::vector<double> seq;
  for (int k = 0; k <= 30; ++k) {
    const double r = 0.1 * std::ldexp(1.0, -k);
    const double e = r * 1e-3;
    const double d = (-phibar(f, r + 2 * e) + 8 * phibar(f, r + e) - 8 * phibar(f, r - e) + phibar(f, r - 2 * e)) /
                     (12.0 * e);
    seq.push_back(r * d / phibar(f, r));
  }
  double sp = 0.0;
  const double lim = cop::aitken_limit(seq, &sp);
  if (spread) *spread = sp;
  if (!(sp <= 1e-6)) throw NumericalError("theta-tilde sequence did not settle for " + f.name());
  return lim;
}

double k_constant(double theta, double h0v, double r0, double H, double W, double* kappa) {
  const double q = r0 * H / h0v;
  const double k1 = (theta + 1.0) * (1.0 + 3.0 * q / 16.0) * std::pow(1.0 + 3.0 * q / 4.0 + 9.0 * q * q / 256.0, theta);
  const double k2 = (2.0 * theta - 1.0) * std::pow(2.0, theta - 1.0) * std::pow(1.0 + 3.0 * q / 8.0, theta - 1.0) +
                    2.0 * (1.0 + 3.0 * q / 4.0);
  const double kap = H / h0v * std::max(k1, k2);
  if (kappa) *kappa = kap;
  return std::numbers::pi * std::pow(std::numbers::sqrt2, theta) / 2.0 *
         ((theta - 1.0) * kap + std::pow(4.0 / 3.0, 2.0 * theta) * W / h0v);
}

TailConstants tail_constants(const Family& f, std::optional<double> r0_override) {
  if (!(f.theta > 1.0)) throw InvalidArgument("tail constants need theta > 1");
  TailConstants tc;
  tc.h0 = h0(f);
  if (f.id == 2) {
    tc.exact_family = true;
    return tc;
  }
  const double limit = 4.0 * tc.h0 / 3.0 * (1.0 + 1e-13);
  constexpr int grid = 10000;
  auto holds = [&](double r) {
    for (int i = 0; i <= grid; ++i)
      if (derivatives(f, r * i / grid).dw > limit) return false;
    return true;
  };
  double r6;
  if (r0_override) {
    const double r = *r0_override;
    if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("r0 override must lie in (0, 1)");
    if (!holds(r)) throw InvalidArgument("r0 override violates w' <= 4 h(0)/3");
    tc.r0_raw = tc.r0 = r6 = r;
  } else {
    double lo = 1e-6, hi = 1.0 - 1e-9;
    if (!holds(lo)) throw NumericalError("no r0 above 1e-6 satisfies w' <= 4 h(0)/3 for " + f.name());
    if (holds(hi)) {
      lo = hi;
    } else {
      while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (holds(mid) ? lo : hi) = mid;
      }
    }
    tc.r0_raw = lo;
    tc.r0 = std::floor(lo * 1e3 + 1e-6) / 1e3;
    r6 = std::floor(lo * 1e6 + 1e-6) / 1e6;
  }
  tc.H = tc.W = -INFINITY;
  for (int i = 0; i <= grid; ++i) {
    const Derivatives d = derivatives(f, r6 * i / grid);
    tc.H = std::max(tc.H, d.dh);
    tc.W = std::max(tc.W, d.d2w);
  }
  tc.K = k_constant(f.theta, tc.h0, tc.r0, tc.H, tc.W, &tc.kappa);
  return tc;
}

double exact_intensity(const Family& f, double n, double s, double t) {
  if (!(s > 0 && t > 0 && s <= n && t <= n)) throw InvalidArgument("intensity needs 0 < s, t <= n");
  const double th = f.theta;
  const double u = s / n, v = t / n;
  if (u >= 1.0 || v >= 1.0) return 0.0;
  const Derivatives du = derivatives(f, u), dv = derivatives(f, v);
  const double S = std::pow(du.w, th) + std::pow(dv.w, th);
  const double r = phibar_inv(f, S);
  if (r >= 1.0) return 0.0;
  const Derivatives dr = derivatives(f, r);
  const double z = std::pow(S, 1.0 / th);
  const double front = std::pow(du.w * dv.w, th - 1.0) * du.dw * dv.dw / dr.dw * std::pow(S, 1.0 / th - 2.0);
  return front * (th - 1.0 + dr.d2w / (dr.dw * dr.dw) * z) / n;
}

double limit_intensity(double theta, double s, double t) {
  if (!(s > 0 && t > 0)) throw InvalidArgument("limit intensity needs s, t > 0");
  if (theta == 1.0) return 0.0;
  return (theta - 1.0) * std::pow(s * t, theta - 1.0) * std::pow(std::pow(s, theta) + std::pow(t, theta), 1.0 / theta - 2.0);
}

double limit_box_mass(double theta, double s, double t) {
  return s + t - std::pow(std::pow(s, theta) + std::pow(t, theta), 1.0 / theta);
}

Exceedances expected_exceedances(const Family& f, double n, double s, double t) {
  if (!(s > 0 && t > 0 && s <= n && t <= n)) throw InvalidArgument("thresholds need 0 < s, t <= n");
  Exceedances e;
  e.exact = s + t - n * phibar_inv(f, phibar(f, s / n) + phibar(f, t / n));
  e.limit = limit_box_mass(f.theta, s, t);
  e.abs_diff = std::fabs(e.exact - e.limit);
  return e;
}

double ThresholdRule::s_at(long n) const { return sqrt_log ? std::sqrt(std::log(static_cast<double>(n))) / 2.0 : s; }
double ThresholdRule::t_at(long n) const { return sqrt_log ? std::sqrt(std::log(static_cast<double>(n))) / 2.0 : t; }

long minimum_feasible_n(const ThresholdRule& rule, double r0) {
  const double gate = 3.0 * r0 / 8.0;
  auto ok = [&](long n) {
    const double dn = static_cast<double>(n);
    return rule.s_at(n) / dn <= gate && rule.t_at(n) / dn <= gate;
  };
  // both rules give ratios that decrease in n for n >= 2
  long lo = 1, hi = 2;
  while (!ok(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > 100000000L) throw GateError("threshold gate cannot be met for n <= 10^8");
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

BoundReport total_bound(const Family& f, long n, const ThresholdRule& rule, const TailConstants& tc) {
  const double dn = static_cast<double>(n);
  const double s = rule.s_at(n), t = rule.t_at(n);
  if (n < 1 || !(s > 0 && t > 0 && s <= dn && t <= dn)) throw InvalidArgument("thresholds need 0 < s_n, t_n <= n");
  BoundReport r;
  r.name = "archimedean-" + std::to_string(f.id);
  r.meta = {{"n", dn}, {"s_n", s}, {"t_n", t}, {"theta", f.theta}, {"h0", tc.h0}};
  r.add("poisson", "min(s_n/n, t_n/n)", std::min(s, t) / dn, "joint exceedance count vs Poisson");
  if (tc.exact_family) {
    r.notes.push_back("exact family, K unnecessary: the limit intensity is the MPPE intensity");
  } else {
    const long need = minimum_feasible_n(rule, tc.r0);
    r.meta["r0"] = tc.r0;
    r.meta["gate_3r0_over_8"] = 3.0 * tc.r0 / 8.0;
    r.meta["min_feasible_n"] = static_cast<double>(need);
    r.meta["H"] = tc.H;
    r.meta["W"] = tc.W;
    r.meta["K"] = tc.K;
    if (s / dn > 3.0 * tc.r0 / 8.0 || t / dn > 3.0 * tc.r0 / 8.0)
      throw GateError("s_n/n and t_n/n must not exceed 3 r0/8 = " + std::to_string(3.0 * tc.r0 / 8.0) +
                          "; requires n >= " + std::to_string(need),
                      need);
    r.add("intensity", "K (s_n+t_n)^2/n", tc.K * (s + t) * (s + t) / dn, "Archimedean limit intensity replacement");
  }
  r.total = r.sum_terms();
  const Exceedances e = expected_exceedances(f, dn, s, t);
  r.meta["expected_exceedances_exact"] = e.exact;
  r.meta["expected_exceedances_limit"] = e.limit;
  if (r.total >= 1.0) r.notes.push_back("total >= 1: the bound carries no information at this n");
  return r;
}

BoundReport total_bound(const Family& f, long n, const ThresholdRule& rule) {
  return total_bound(f, n, rule, tail_constants(f));
}

namespace {

struct Published {
  int id;
  double r0, H, W, K;
};

const std::vector<Published>& published(double theta) {
  static const std::vector<Published> t15{{4, 0.250, 0.731, 1.778, 16.2},  {6, 0.851, 2.531, 21.027, 186.0},
                                          {12, 0.133, 1.331, 3.080, 28.4}, {14, 0.158, 0.754, 1.761, 24.3},
                                          {15, 0.578, 0.229, 0.703, 9.0},  {21, 0.738, 0.240, 1.053, 10.8}};
  static const std::vector<Published> t3{{4, 0.250, 0.731, 1.778, 207.2},  {6, 0.701, 0.375, 2.078, 1401.1},
                                         {12, 0.133, 1.331, 3.080, 372.4}, {14, 0.194, 0.291, 0.736, 313.9},
                                         {15, 0.350, 1.773, 0.457, 107.3}, {21, 0.774, 0.238, 1.479, 126.1}};
  static const std::vector<Published> none;
  if (theta == 1.5) return t15;
  if (theta == 3.0) return t3;
  return none;
}

}  // namespace

std::vector<TableRow> constants_table(double theta) {
  const std::vector<int> ids{4, 6, 12, 14, 15, 21};
  std::vector<TableRow> rows(ids.size());
  const long m = static_cast<long>(ids.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < m; ++i) {
    TableRow& row = rows[static_cast<std::size_t>(i)];
    row.id = ids[static_cast<std::size_t>(i)];
    row.theta = theta;
    row.computed = tail_constants(Family::make(row.id, theta));
  }
  for (TableRow& row : rows)
    for (const Published& p : published(theta))
      if (p.id == row.id) {
        row.ref_r0 = p.r0, row.ref_H = p.H, row.ref_W = p.W, row.ref_K = p.K;
        const double dk = std::fabs(row.computed.K - p.K);
        row.k_within_tolerance = theta == 1.5 ? dk <= 0.5 : dk <= 0.01 * p.K;
      }
  return rows;
}

void write_table_csv(std::ostream& os, const std::vector<TableRow>& rows) {
  os << "family,theta,h0,r0,H,W,K,ref_r0,ref_H,ref_W,ref_K,K_rel_diff,K_ok\n";
  char buf[512];
  for (const TableRow& r : rows) {
    const TailConstants& c = r.computed;
    std::snprintf(buf, sizeof buf, "%d,%g,%.6f,%.3f,%.6f,%.6f,%.4f", r.id, r.theta, c.h0, c.r0, c.H, c.W, c.K);
    os << buf;
    if (r.ref_K) {
      std::snprintf(buf, sizeof buf, ",%.3f,%.3f,%.3f,%.1f,%.6f,%d", *r.ref_r0, *r.ref_H, *r.ref_W, *r.ref_K,
                    (c.K - *r.ref_K) / *r.ref_K, r.k_within_tolerance ? 1 : 0);
      os << buf << '\n';
    } else {
      os << ",,,,,,\n";
    }
  }
}

}  // namespace steinevt::arch

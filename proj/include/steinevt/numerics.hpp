#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace steinevt {

struct Quad {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive 15-point Gauss-Kronrod on [a,b]; either end may be infinite.
template <class F>
Quad integrate(F f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 20) {
  if (!(b > a)) return {};
  Quad q;
  q.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel_tol,
                                                                         &q.error);
  return q;
}

/// Iterated integral over [a1,b1] x [a2,b2] of f(s,t).  With split_diagonal the inner
/// integral is broken at s = t so that densities jumping across the diagonal stay smooth
/// on each piece.
template <class F>
Quad integrate2(F f, double a1, double b1, double a2, double b2, bool split_diagonal = false,
                double rel_tol = 1e-11) {
  double err_acc = 0.0;
  auto inner = [&](double t) {
    auto g = [&](double s) { return f(s, t); };
    Quad r;
    if (split_diagonal && t > a1 && t < b1) {
      Quad lo = integrate(g, a1, t, rel_tol), hi = integrate(g, t, b1, rel_tol);
      r = {lo.value + hi.value, lo.error + hi.error};
    } else {
      r = integrate(g, a1, b1, rel_tol);
    }
    err_acc = std::max(err_acc, r.error);
    return r.value;
  };
  Quad out = integrate(inner, a2, b2, rel_tol);
  double width = std::isfinite(b2 - a2) ? (b2 - a2) : 1.0;
  out.error += err_acc * width;
  return out;
}

}  // namespace steinevt

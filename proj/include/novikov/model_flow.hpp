#ifndef NOVIKOV_MODEL_FLOW_HPP
#define NOVIKOV_MODEL_FLOW_HPP

#include <cassert>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "novikov/errors.hpp"

namespace novikov {

/// Point of the standard chart R^k x R^{n-k}; x carries the coordinates that
/// expand along the model flow, y the contracting ones.
struct ModelPoint {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t dim() const { return x.size() + y.size(); }
  double x_norm2() const {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
  }
  double y_norm2() const {
    double s = 0;
    for (double v : y) s += v * v;
    return s;
  }
  double norm2() const { return x_norm2() + y_norm2(); }
};

/// Annulus B(0,R) \ B(0,r).
struct AnnulusSpec {
  double R;
  double r;
  void validate() const {
    if (!(R > r && r > 0)) throw invalid_params("annulus requires R > r > 0");
  }
};

/// ln(x^2 + sqrt(x^4 - 1)) for x >= 1: the residence-time constant of the
/// model flow in an annulus of radius ratio x.
inline double lln(double x) {
  assert(x >= 1.0);
  double x2 = x * x;
  return std::log(x2 + std::sqrt(x2 * x2 - 1.0));
}

/// Closed-form model trajectory (x0 e^t, y0 e^-t).  The Lyapunov function
/// f0 = -|x|^2 + |y|^2 is nonincreasing along it.
inline ModelPoint model_trajectory(const ModelPoint& z0, double t) {
  ModelPoint z = z0;
  double ex = std::exp(t), ey = std::exp(-t);
  for (double& v : z.x) v *= ex;
  for (double& v : z.y) v *= ey;
  return z;
}

namespace detail {

/// Bisection on a monotone function to absolute bracket width `tol`.
/// Requires fn(lo) and fn(hi) to straddle the target.
inline double bisect_monotone(const std::function<double(double)>& fn, double lo, double hi,
                              double target, double tol = 1e-13) {
  double flo = fn(lo) - target;
  double fhi = fn(hi) - target;
  assert(flo == 0 || fhi == 0 || (flo < 0) != (fhi < 0));
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = fn(mid) - target;
    if (fm == 0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol) {
  struct Rec {
    const std::function<double(double)>& f;
    double tol;
    double run(double a, double b, double fa, double fm, double fb, double whole, int depth) {
      double m = 0.5 * (a + b);
      double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      double flm = f(lm), frm = f(rm);
      double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
      double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
      if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
        return left + right + (left + right - whole) / 15.0;
      return run(a, m, fa, flm, fm, left, depth - 1) + run(m, b, fm, frm, fb, right, depth - 1);
    }
  };
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  Rec rec{f, tol};
  return rec.run(a, b, fa, fm, fb, whole, 48);
}

/// g(t) = |gamma(t)|^2 = X e^{2t} + Y e^{-2t} for the model flow.
struct RadiusProfile {
  double X, Y;
  double operator()(double t) const { return X * std::exp(2 * t) + Y * std::exp(-2 * t); }
  bool bimodal() const { return X > 0 && Y > 0; }
  double t_min() const { return 0.25 * std::log(Y / X); }
  double g_min() const { return 2.0 * std::sqrt(X * Y); }

  /// Solve g = c on the decreasing branch (left of t_min for X,Y > 0; the
  /// whole line when X = 0).  Requires c > inf g on the branch.
  double solve_decreasing(double c) const {
    double hi = (X > 0) ? t_min() : 0.5 * std::log(Y / c) + 1.0;
    while ((*this)(hi) > c) hi += 1.0;
    double lo = hi - 1.0;
    while ((*this)(lo) < c) lo -= 1.0;
    return bisect_monotone([this](double t) { return (*this)(t); }, lo, hi, c);
  }
  /// Solve g = c on the increasing branch.
  double solve_increasing(double c) const {
    double lo = (Y > 0) ? t_min() : 0.5 * std::log(c / X) - 1.0;
    while ((*this)(lo) > c) lo -= 1.0;
    double hi = lo + 1.0;
    while ((*this)(hi) < c) hi += 1.0;
    return bisect_monotone([this](double t) { return (*this)(t); }, lo, hi, c);
  }
};

}  // namespace detail

struct ResidenceResult {
  double time;
  double length;
  /// Up to two time intervals the trajectory spends in the region.
  std::vector<std::pair<double, double>> intervals;
};

/// Time and arc length the model trajectory through z0 spends in the annulus.
/// Both satisfy the closed-form bounds time <= lln(R/r), length <= 2R.
inline ResidenceResult annulus_residence(const ModelPoint& z0, const AnnulusSpec& spec) {
  spec.validate();
  detail::RadiusProfile g{z0.x_norm2(), z0.y_norm2()};
  const double R2 = spec.R * spec.R, r2 = spec.r * spec.r;

  std::vector<std::pair<double, double>> iv;
  if (g.X == 0 && g.Y == 0) throw no_intersection("trajectory is the fixed point 0");
  if (g.bimodal()) {
    if (g.g_min() > R2) throw no_intersection("trajectory stays outside B(0,R)");
    double tR1 = g.solve_decreasing(R2);
    double tR2 = g.solve_increasing(R2);
    if (g.g_min() >= r2) {
      iv.emplace_back(tR1, tR2);
    } else {
      iv.emplace_back(tR1, g.solve_decreasing(r2));
      iv.emplace_back(g.solve_increasing(r2), tR2);
    }
  } else if (g.X == 0) {
    iv.emplace_back(g.solve_decreasing(R2), g.solve_decreasing(r2));
  } else {
    iv.emplace_back(g.solve_increasing(r2), g.solve_increasing(R2));
  }

  double time = 0, length = 0;
  for (auto& [a, b] : iv) {
    time += b - a;
    length += detail::adaptive_simpson([&g](double t) { return std::sqrt(g(t)); }, a, b, 1e-10);
  }
  return {time, length, std::move(iv)};
}

/// Time the model trajectory spends in f0^{-1}([-r^2, r^2]) \ B(0,r); the
/// closed-form bound is 2.
inline double lens_residence(const ModelPoint& z0, double r) {
  if (!(r > 0)) throw invalid_params("lens radius must be positive");
  const double X = z0.x_norm2(), Y = z0.y_norm2();
  const double r2 = r * r;
  if (X == 0 && Y == 0) throw no_intersection("trajectory is the fixed point 0");
  // f0(gamma(t)) = -X e^{2t} + Y e^{-2t} is strictly decreasing; the slab
  // f0^{-1}([-r^2, r^2]) is exited exactly when |gamma| = r on an axis.
  if (X == 0 || Y == 0) return 0.0;

  auto phi = [&](double t) { return -X * std::exp(2 * t) + Y * std::exp(-2 * t); };
  // brackets for phi = +-r^2
  double lo = 0, hi = 0;
  while (phi(lo) < r2) lo -= 1.0;
  while (phi(hi) > -r2) hi += 1.0;
  double t1 = detail::bisect_monotone([&](double t) { return -phi(t); }, lo, hi, -r2);
  double t2 = detail::bisect_monotone([&](double t) { return -phi(t); }, lo, hi, r2);

  detail::RadiusProfile g{X, Y};
  double ball = 0;
  if (g.g_min() <= r2) {
    double s1 = g.solve_decreasing(r2);
    double s2 = g.solve_increasing(r2);
    ball = s2 - s1;  // |f0| <= |z|^2, so the sub-r ball interval lies in the slab
  }
  return (t2 - t1) - ball;
}

/// Quickness bookkeeping: a flow that is quick with budget beta off charts of
/// radius alpha stays quick with budget beta + 8N when the charts shrink to
/// alpha/2, because one annulus crossing costs at most lln(2) <= 8.
inline double quickness_halving(unsigned n_charts, double beta) {
  assert(lln(2.0) <= 8.0);
  return beta + 8.0 * n_charts;
}

/// Per-annulus crossing cost lln(2) = ln(4 + sqrt(15)).
inline double annulus_halving_cost() { return lln(2.0); }

}  // namespace novikov

#endif

#ifndef NOVIKOV_A_CONSTRUCTION_HPP
#define NOVIKOV_A_CONSTRUCTION_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "novikov/errors.hpp"
#include "novikov/model_flow.hpp"

namespace novikov {

/// Smooth 0 -> 1 transition on [0,1] built from exp(-1/s) mollifiers.
inline double smooth_step(double u) {
  if (u <= 0) return 0.0;
  if (u >= 1) return 1.0;
  double a = std::exp(-1.0 / u);
  double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

/// Rescaling data for the chart flow: shell [mu, r] with collar width delta,
/// outer speed factor Gamma >= 1, field norm B and chart distortion D >= 1.
/// Valid parameters satisfy 0 < mu < r, 0 < delta < (r - mu)/2 and the
/// collar crossing-time condition
///   lln(r/(r-delta))   < min(D r / 2B, 1/2)
///   lln((mu+delta)/mu) < min(D r / 2B, 1/2).
struct AConstructionParams {
  double r;
  double mu;
  double delta;
  double gamma;
  double field_norm;  // B
  double distortion;  // D
  bool bump_off = false;  // degenerate profile: cutoff forced to 0 everywhere

  void validate() const {
    if (!(mu > 0 && r > mu)) throw invalid_params("need 0 < mu < r");
    if (!(delta > 0 && delta < (r - mu) / 2)) throw invalid_params("need 0 < delta < (r-mu)/2");
    if (!(gamma >= 1)) throw invalid_params("need Gamma >= 1");
    if (!(field_norm > 0)) throw invalid_params("need B > 0");
    if (!(distortion >= 1)) throw invalid_params("need D >= 1");
    double cap = std::min(distortion * r / (2 * field_norm), 0.5);
    if (!(lln(r / (r - delta)) < cap) || !(lln((mu + delta) / mu) < cap))
      throw invalid_params("collar width fails the crossing-time condition");
  }

  /// Residence bound 3 D r / B for the shell mu <= |z| <= r.
  double residence_bound() const { return 3.0 * distortion * r / field_norm; }

  /// Cutoff supported in ]mu, r[, identically 1 on [mu+delta, r-delta].
  double bump(double t) const {
    if (t <= mu || t >= r) return 0.0;
    if (t < mu + delta) return smooth_step((t - mu) / delta);
    if (t > r - delta) return smooth_step((r - t) / delta);
    return 1.0;
  }

  /// Speed profile without parameter validation (hot path).
  double lambda_unchecked(double t) const {
    if (t > r) return gamma;  // natural extension just outside the chart
    double th = bump_off ? 0.0 : bump(t);
    double mid = th > 0 ? field_norm / (distortion * t) : 0.0;
    if (t <= mu + delta) return (1.0 - th) + th * mid;
    if (t < r - delta) return bump_off ? 1.0 : field_norm / (distortion * t);
    return gamma * (1.0 - th) + th * mid;
  }
};

/// Largest collar width (with a factor `safety` margin on the crossing-time
/// cap) admissible for the construction, found by bisection.
inline double select_delta(double r, double mu, double field_norm, double distortion,
                           double safety = 2.0) {
  if (!(mu > 0 && r > mu && field_norm > 0 && distortion >= 1))
    throw invalid_params("need 0 < mu < r, B > 0, D >= 1");
  double cap = std::min(distortion * r / (2 * field_norm), 0.5) / safety;
  auto ok = [&](double d) { return lln(r / (r - d)) < cap && lln((mu + d) / mu) < cap; };
  double hi = (r - mu) / 2 * (1 - 1e-9);
  if (ok(hi)) return hi;
  double lo = 0;
  for (int i = 0; i < 100; ++i) {
    double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  if (!(lo > 0)) throw invalid_params("no admissible collar width");
  return lo;
}

/// Value of the piecewise speed profile: 1 on [0, mu], B/(D t) across the
/// middle band, Gamma at the outer rim, glued smoothly through the collars.
inline double a_lambda_profile(const AConstructionParams& p, double t) {
  p.validate();
  if (t < 0) throw invalid_params("profile argument must be nonnegative");
  return p.lambda_unchecked(t);
}

namespace detail {

struct AFieldState {
  std::vector<double> x, y;
  double radius2() const {
    double s = 0;
    for (double v : x) s += v * v;
    for (double v : y) s += v * v;
    return s;
  }
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
};

inline AFieldState a_rk4_step(const AConstructionParams& p, const AFieldState& z, double h,
                              double dir) {
  auto rhs = [&](const AFieldState& s, AFieldState& d) {
    double lam = dir * p.lambda_unchecked(std::sqrt(s.radius2()));
    d.x.resize(s.x.size());
    d.y.resize(s.y.size());
    for (std::size_t i = 0; i < s.x.size(); ++i) d.x[i] = lam * s.x[i];
    for (std::size_t i = 0; i < s.y.size(); ++i) d.y[i] = -lam * s.y[i];
  };
  auto add = [](const AFieldState& a, const AFieldState& b, double c) {
    AFieldState r = a;
    for (std::size_t i = 0; i < r.x.size(); ++i) r.x[i] += c * b.x[i];
    for (std::size_t i = 0; i < r.y.size(); ++i) r.y[i] += c * b.y[i];
    return r;
  };
  AFieldState k1, k2, k3, k4;
  rhs(z, k1);
  rhs(add(z, k1, h / 2), k2);
  rhs(add(z, k2, h / 2), k3);
  rhs(add(z, k3, h), k4);
  AFieldState r = z;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    r.x[i] += h / 6 * (k1.x[i] + 2 * k2.x[i] + 2 * k3.x[i] + k4.x[i]);
  for (std::size_t i = 0; i < r.y.size(); ++i)
    r.y[i] += h / 6 * (k1.y[i] + 2 * k2.y[i] + 2 * k3.y[i] + k4.y[i]);
  return r;
}

/// Largest speed the rescaled field attains up to radius 1.05 r.
inline double a_speed_cap(const AConstructionParams& p) {
  double lam_max = std::max({1.0, p.gamma, p.field_norm / (p.distortion * p.mu)});
  return 1.05 * p.r * lam_max;
}

/// Time in the shell [mu, r] contributed by one accepted step.  Splits the
/// step only while a boundary crossing is possible within it: when the two
/// endpoint classifications differ or an endpoint sits within the step's
/// travel margin of a boundary.
inline double shell_time_in_step(const AConstructionParams& p, const AFieldState& z, double h,
                                 double dir, double vmax, int depth = 60) {
  AFieldState z1 = a_rk4_step(p, z, h, dir);
  double rho0 = std::sqrt(z.radius2()), rho1 = std::sqrt(z1.radius2());
  bool in0 = rho0 >= p.mu && rho0 <= p.r, in1 = rho1 >= p.mu && rho1 <= p.r;
  if (depth <= 0 || h < 1e-12) return h * 0.5 * (in0 + in1);
  double margin = 2.0 * h * vmax;
  auto clear_of_boundaries = [&](double rho) {
    return std::min(std::abs(rho - p.mu), std::abs(rho - p.r)) > margin;
  };
  if (in0 == in1 && clear_of_boundaries(rho0) && clear_of_boundaries(rho1))
    return in0 ? h : 0.0;
  double left = shell_time_in_step(p, z, h / 2, dir, vmax, depth - 1);
  return left + shell_time_in_step(p, a_rk4_step(p, z, h / 2, dir), h / 2, dir, vmax, depth - 1);
}

}  // namespace detail

/// Residence time of the rescaled-field trajectory through z0 in the shell
/// mu <= |z| <= r, integrated numerically over the whole trajectory (both
/// time directions); the construction guarantees it is at most 3 D r / B.
inline double a_field_residence(const AConstructionParams& p, const ModelPoint& z0,
                                double rel_tol = 1e-8) {
  p.validate();
  detail::AFieldState start{z0.x, z0.y};
  const double mu2 = p.mu * p.mu, r2 = p.r * p.r;
  if (start.radius2() == 0) throw no_intersection("trajectory is the fixed point 0");
  const double beyond = r2 * 1.1025;  // (1.05 r)^2

  const double vmax = detail::a_speed_cap(p);
  const double h_cap = std::min(0.1 * (p.r - p.mu) / vmax, 0.25);

  double total = 0;
  for (double dir : {+1.0, -1.0}) {
    detail::AFieldState z = start;
    double t = 0, h = h_cap;
    const double t_cap = 5000;
    while (t < t_cap) {
      double g = z.radius2();
      // outward and already clear of the shell: this direction is done
      bool outward = dir > 0 ? z.x_norm2() >= z.y_norm2() : z.y_norm2() >= z.x_norm2();
      if (g > beyond && outward) break;
      if (g < 1e-30 * mu2) break;  // pinned to the stable axis, never returns

      // adaptive RK4 by step doubling
      detail::AFieldState full = detail::a_rk4_step(p, z, h, dir);
      detail::AFieldState half =
          detail::a_rk4_step(p, detail::a_rk4_step(p, z, h / 2, dir), h / 2, dir);
      double err = 0, scale = 0;
      for (std::size_t i = 0; i < full.x.size(); ++i) {
        err = std::max(err, std::abs(full.x[i] - half.x[i]));
        scale = std::max(scale, std::abs(half.x[i]));
      }
      for (std::size_t i = 0; i < full.y.size(); ++i) {
        err = std::max(err, std::abs(full.y[i] - half.y[i]));
        scale = std::max(scale, std::abs(half.y[i]));
      }
      double rel = err / 15.0 / std::max(scale, 1e-12);
      if (rel > rel_tol && h > 1e-12) {
        h = std::max(h * std::max(0.2, 0.9 * std::pow(rel_tol / rel, 0.2)), 1e-12);
        continue;
      }
      total += detail::shell_time_in_step(p, z, h, dir, vmax);
      z = half;
      t += h;
      double grow = rel > 0 ? 0.9 * std::pow(rel_tol / rel, 0.2) : 4.0;
      h = std::min(h * std::clamp(grow, 0.2, 4.0), h_cap);
    }
  }
  return total;
}

}  // namespace novikov

#endif

#ifndef NOVIKOV_ODE_HPP
#define NOVIKOV_ODE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "novikov/errors.hpp"

namespace novikov {

using Vec = std::vector<double>;

inline double vec_dist(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double vec_norm(const Vec& a) {
  double s = 0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

/// A C^1 vector field with a declared bound on its derivative norm and a
/// radius outside of which it vanishes.
struct FieldSpec {
  std::size_t dim;
  std::function<Vec(const Vec&)> eval;
  double lipschitz;        // declared D with |field(a)-field(b)| <= D |a-b|
  double support_radius;   // sampling box half-width

  /// Spot check of the declared Lipschitz bound on random nearby pairs.
  bool lipschitz_spot_check(unsigned seed, int pairs = 200) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(-support_radius, support_radius);
    std::uniform_real_distribution<double> offs(-0.1 * support_radius, 0.1 * support_radius);
    for (int k = 0; k < pairs; ++k) {
      Vec a(dim), b(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        a[i] = box(rng);
        b[i] = a[i] + offs(rng);
      }
      double lhs = vec_dist(eval(a), eval(b));
      if (lhs > lipschitz * vec_dist(a, b) * (1 + 1e-9) + 1e-14) return false;
    }
    return true;
  }
};

inline Vec rk4_step(const std::function<Vec(const Vec&)>& f, const Vec& z, double h) {
  const std::size_t n = z.size();
  Vec k1 = f(z), tmp(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = z[i] + 0.5 * h * k1[i];
  Vec k2 = f(tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = z[i] + 0.5 * h * k2[i];
  Vec k3 = f(tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = z[i] + h * k3[i];
  Vec k4 = f(tmp);
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = z[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

/// Trajectory on a fixed grid with a halved-step Richardson error estimate.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<Vec> states;
  double step;
  int integrator_order = 4;
  double error_estimate = 0;

  const Vec& back() const { return states.back(); }
};

/// Fixed-step classical RK4 over [0, T].  T may be negative (backward run).
/// The error estimate is 16/15 of the largest grid deviation from a run at
/// half the step; StepTooLarge fires when it exceeds `budget`.
inline TrajectoryRecord integrate_ivp(const FieldSpec& v, const Vec& x0, double T, double h,
                                      double budget = std::numeric_limits<double>::infinity()) {
  if (!(h > 0)) throw invalid_params("step must be positive");
  if (x0.size() != v.dim) throw dimension_mismatch("initial point dimension mismatch");
  std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(T) / h - 1e-12)));
  if (T == 0) n = 0;
  double h_eff = n > 0 ? T / static_cast<double>(n) : 0.0;

  TrajectoryRecord rec;
  rec.step = h_eff;
  rec.times.reserve(n + 1);
  rec.states.reserve(n + 1);
  rec.times.push_back(0);
  rec.states.push_back(x0);
  Vec z = x0, zf = x0;
  double worst = 0;
  for (std::size_t k = 0; k < n; ++k) {
    z = rk4_step(v.eval, z, h_eff);
    zf = rk4_step(v.eval, rk4_step(v.eval, zf, h_eff / 2), h_eff / 2);
    rec.times.push_back(h_eff * static_cast<double>(k + 1));
    rec.states.push_back(z);
    worst = std::max(worst, vec_dist(z, zf));
  }
  rec.error_estimate = worst * 16.0 / 15.0;
  if (rec.error_estimate > budget) throw step_too_large(rec.error_estimate);
  return rec;
}

}  // namespace novikov

#endif

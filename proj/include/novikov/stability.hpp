#ifndef NOVIKOV_STABILITY_HPP
#define NOVIKOV_STABILITY_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "novikov/errors.hpp"
#include "novikov/ode.hpp"

namespace novikov {

/// Separation bound eps e^{Dt} + (alpha/D)(e^{Dt} - 1) for trajectories of
/// fields with C0 distance alpha, derivative bound D, and initial gap eps.
inline double gronwall_bound(double eps, double alpha, double D, double t) {
  if (!(D > 0)) throw invalid_params("need D > 0");
  if (t < 0 || eps < 0 || alpha < 0) throw invalid_params("need t, eps, alpha >= 0");
  double e = std::exp(D * t);
  return eps * e + alpha / D * (e - 1.0);
}

/// Sup-norm gap between two fields sampled on a uniform grid over the
/// support box, at most ~cap_points samples.
inline double measured_c0_gap(const FieldSpec& u, const FieldSpec& w, int per_dim = 64,
                              double cap_points = 1e6) {
  const std::size_t n = u.dim;
  double R = std::max(u.support_radius, w.support_radius);
  int g = std::min<double>(per_dim, std::floor(std::pow(cap_points, 1.0 / double(n))));
  g = std::max(g, 2);
  std::vector<int> idx(n, 0);
  Vec z(n);
  double worst = 0;
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) z[i] = -R + 2.0 * R * idx[i] / double(g - 1);
    worst = std::max(worst, vec_dist(u.eval(z), w.eval(z)));
    std::size_t d = 0;
    while (d < n && ++idx[d] == g) idx[d++] = 0;
    if (d == n) break;
  }
  return worst;
}

struct SeparationReport {
  bool ok = true;
  double alpha = 0;        // measured C0 gap
  double eps = 0;          // initial separation
  double lipschitz = 0;    // declared D of the reference field
  double budget = 0;       // 10 * (sum of integration error estimates)
  double worst_t = 0;      // time of smallest slack
  double worst_separation = 0;
  double worst_bound = 0;
  double min_slack = std::numeric_limits<double>::infinity();
};

/// Integrates both fields from x0 and y0 and compares the measured
/// separation against the Gronwall bound plus a 10x integration-error
/// budget; the report carries the worst slack over the grid.
inline SeparationReport separation_check(const FieldSpec& u, const FieldSpec& w, const Vec& x0,
                                         const Vec& y0, double T, double h,
                                         int alpha_grid_per_dim = 64) {
  SeparationReport rep;
  rep.alpha = measured_c0_gap(u, w, alpha_grid_per_dim);
  rep.eps = vec_dist(x0, y0);
  rep.lipschitz = u.lipschitz;
  TrajectoryRecord a = integrate_ivp(u, x0, T, h);
  TrajectoryRecord b = integrate_ivp(w, y0, T, h);
  rep.budget = 10.0 * (a.error_estimate + b.error_estimate);
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    double t = a.times[k];
    double sep = vec_dist(a.states[k], b.states[k]);
    double bound = gronwall_bound(rep.eps, rep.alpha, rep.lipschitz, t);
    double slack = bound + rep.budget - sep;
    if (slack < rep.min_slack) {
      rep.min_slack = slack;
      rep.worst_t = t;
      rep.worst_separation = sep;
      rep.worst_bound = bound;
    }
  }
  rep.ok = rep.min_slack >= 0;
  return rep;
}

/// Throwing form: a violated separation bound signals a wrong Lipschitz
/// declaration or an integrator failure.
inline SeparationReport require_separation_bound(const SeparationReport& rep) {
  if (!rep.ok)
    throw bound_violated("separation exceeds the bound at t = " + std::to_string(rep.worst_t),
                         rep.worst_t);
  return rep;
}

struct CrossingResult {
  double tau0;
  Vec point;
  double bracket_lo;
  double bracket_hi;
};

/// Unique transversal crossing of the level set {g = 0} inside the window.
/// The level values at the window ends must have opposite signs; uniqueness
/// is asserted by requiring d/dt g(gamma(t)) to keep one sign on the sampled
/// grid.
inline CrossingResult crossing_time(const FieldSpec& w, const Vec& x0,
                                    const std::function<double(const Vec&)>& g, double t_lo,
                                    double t_hi, double h) {
  if (!(t_hi > t_lo)) throw invalid_params("empty crossing window");
  // state at the window start (backward integration when t_lo < 0)
  Vec z = x0;
  if (t_lo != 0) z = integrate_ivp(w, x0, t_lo, h).back();

  std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((t_hi - t_lo) / h)));
  double dt = (t_hi - t_lo) / static_cast<double>(n);
  std::vector<Vec> states{z};
  std::vector<double> G{g(z)};
  for (std::size_t k = 0; k < n; ++k) {
    z = rk4_step(w.eval, z, dt);
    states.push_back(z);
    G.push_back(g(z));
  }
  if (!(G.front() * G.back() < 0))
    throw no_sign_change("level values at the window ends do not straddle zero");
  int dir = 0;
  for (std::size_t k = 0; k + 1 < G.size(); ++k) {
    double d = G[k + 1] - G[k];
    if (d == 0) continue;
    int s = d > 0 ? 1 : -1;
    if (dir == 0) dir = s;
    if (s != dir)
      throw multiple_crossings("level derivative changes sign across the window");
  }
  std::size_t bracket = 0;
  for (std::size_t k = 0; k + 1 < G.size(); ++k)
    if (G[k] == 0 || G[k] * G[k + 1] < 0) {
      bracket = k;
      break;
    }

  // bisection on the dense output, re-integrating short spans with RK4
  double lo = 0, hi = dt;
  Vec zlo = states[bracket];
  double glo = G[bracket];
  auto advance = [&](const Vec& from, double span) {
    Vec s = from;
    int sub = 4;
    for (int i = 0; i < sub; ++i) s = rk4_step(w.eval, s, span / sub);
    return s;
  };
  Vec point = zlo;
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    double mid = 0.5 * (lo + hi);
    Vec zm = advance(zlo, mid - lo);
    double gm = g(zm);
    if (gm == 0 || (gm > 0) == (glo > 0)) {
      zlo = zm;
      glo = gm;
      lo = mid;
    } else {
      hi = mid;
    }
    point = zm;
  }
  double tau = t_lo + dt * static_cast<double>(bracket) + 0.5 * (lo + hi);
  return {tau, point, t_lo + dt * bracket + lo, t_lo + dt * bracket + hi};
}

struct ReachFailure {
  std::size_t sample;
  std::string reason;
  Vec exit_point;
};

struct ReachReport {
  std::size_t total = 0;
  std::vector<ReachFailure> failures;
  bool ok() const { return failures.empty(); }
};

/// Checks that the reference exit behaviour survives the perturbation: every
/// sampled v-trajectory must exit (precondition), and then every w-trajectory
/// must exit with its exit point inside the prescribed neighborhood.
inline ReachReport reach_check(const FieldSpec& v, const FieldSpec& w,
                               const std::vector<Vec>& samples,
                               const std::function<bool(const Vec&)>& exit_region,
                               const std::function<bool(const Vec&)>& neighborhood, double t_max,
                               double h) {
  auto first_exit = [&](const FieldSpec& f, const Vec& start, Vec& out) {
    Vec z = start;
    double t = 0;
    while (t < t_max) {
      if (exit_region(z)) {
        out = z;
        return true;
      }
      z = rk4_step(f.eval, z, h);
      t += h;
    }
    return false;
  };
  ReachReport rep;
  rep.total = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Vec exit_v, exit_w;
    if (!first_exit(v, samples[i], exit_v))
      throw invalid_params("reference trajectory " + std::to_string(i) +
                           " does not reach the exit region");
    if (!first_exit(w, samples[i], exit_w)) {
      rep.failures.push_back({i, "perturbed trajectory never exits", {}});
      continue;
    }
    if (!neighborhood(exit_w))
      rep.failures.push_back({i, "exit point leaves the neighborhood", exit_w});
  }
  return rep;
}

}  // namespace novikov

#endif

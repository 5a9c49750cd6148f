#ifndef NOVIKOV_TORUS_MORSE_HPP
#define NOVIKOV_TORUS_MORSE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "novikov/errors.hpp"

namespace novikov {

struct Vec2 {
  double x = 0, y = 0;
};

inline double wrap01(double v) { return v - std::floor(v); }
/// Difference folded into [-1/2, 1/2) (distance on the circle).
inline double wrap_diff(double v) { return v - std::floor(v + 0.5); }

/// Circle-valued Morse function on the flat 2-torus:
///   f(x, y) = x + (a / 2 pi) sin(2 pi x) cos(2 pi y)   (mod 1).
/// Its lift to the cyclic cover R x S^1 is F(xt, y) = xt + g(xt, y), which
/// drops by 1 under the deck translation xt -> xt - 1.
struct TorusMorseSystem {
  double amplitude = 1.3;

  double periodic_part(double x, double y) const {
    const double w = 2 * std::numbers::pi;
    return amplitude / w * std::sin(w * x) * std::cos(w * y);
  }
  double cover_height(double xt, double y) const { return xt + periodic_part(xt, y); }

  Vec2 gradient(double x, double y) const {
    const double w = 2 * std::numbers::pi;
    double sx = std::sin(w * x), cx = std::cos(w * x);
    double sy = std::sin(w * y), cy = std::cos(w * y);
    return {1 + amplitude * cx * cy, -amplitude * sx * sy};
  }

  /// Hessian entries (hxx, hxy, hyy).
  void hessian(double x, double y, double& hxx, double& hxy, double& hyy) const {
    const double w = 2 * std::numbers::pi;
    double sx = std::sin(w * x), cx = std::cos(w * x);
    double sy = std::sin(w * y), cy = std::cos(w * y);
    hxx = -w * amplitude * sx * cy;
    hxy = -w * amplitude * cx * sy;
    hyy = -w * amplitude * sx * cy;
  }
};

struct CriticalPoint {
  Vec2 pos;          // representative in [0,1)^2
  int index;         // number of negative Hessian eigenvalues
  double f_value;    // F at the canonical lift (xt = pos.x)
  double hess_det;
  double eig_lo, eig_hi;
  Vec2 unstable_dir;  // lex-positive eigenvector of the negative eigenvalue (saddles)
};

namespace detail {

inline Vec2 lex_positive(Vec2 v) {
  if (v.x < -1e-12 || (std::abs(v.x) <= 1e-12 && v.y < 0)) return {-v.x, -v.y};
  return v;
}

inline Vec2 symmetric_eigvec(double hxx, double hxy, double hyy, double lambda) {
  // (H - lambda) v = 0; pick the numerically larger row
  Vec2 a{hxy, lambda - hxx};
  Vec2 b{lambda - hyy, hxy};
  Vec2 v = (a.x * a.x + a.y * a.y >= b.x * b.x + b.y * b.y) ? a : b;
  double n = std::hypot(v.x, v.y);
  if (n == 0) return {1, 0};
  return lex_positive({v.x / n, v.y / n});
}

}  // namespace detail

/// Newton refinement of grad f = 0 from a uniform grid of seeds, deduplicated
/// on the torus.  Every returned point satisfies |grad f| <= 1e-10 and has a
/// Hessian determinant bounded away from 0; otherwise the function is judged
/// non-Morse at this amplitude and DegenerateCritical is thrown.
inline std::vector<CriticalPoint> find_critical_points(const TorusMorseSystem& sys,
                                                       int grid = 64) {
  std::vector<Vec2> roots;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      Vec2 z{(i + 0.5) / grid, (j + 0.5) / grid};
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        Vec2 gr = sys.gradient(z.x, z.y);
        if (std::hypot(gr.x, gr.y) < 1e-13) {
          converged = true;
          break;
        }
        double hxx, hxy, hyy;
        sys.hessian(z.x, z.y, hxx, hxy, hyy);
        double det = hxx * hyy - hxy * hxy;
        if (std::abs(det) < 1e-12) break;
        double dx = (-gr.x * hyy + gr.y * hxy) / det;
        double dy = (-hxx * gr.y + hxy * gr.x) / det;
        if (std::hypot(dx, dy) > 0.25) break;  // Newton step escaping the cell basin
        z.x += dx;
        z.y += dy;
      }
      if (!converged) continue;
      Vec2 gr = sys.gradient(z.x, z.y);
      if (std::hypot(gr.x, gr.y) > 1e-10) continue;
      z = {wrap01(z.x), wrap01(z.y)};
      bool dup = false;
      for (const auto& r : roots)
        if (std::abs(wrap_diff(r.x - z.x)) < 1e-8 && std::abs(wrap_diff(r.y - z.y)) < 1e-8) {
          dup = true;
          break;
        }
      if (!dup) roots.push_back(z);
    }
  }

  std::vector<CriticalPoint> cps;
  for (const Vec2& z : roots) {
    double hxx, hxy, hyy;
    sys.hessian(z.x, z.y, hxx, hxy, hyy);
    double det = hxx * hyy - hxy * hxy;
    if (std::abs(det) < 1e-6)
      throw degenerate_critical("Hessian determinant below margin at a critical point");
    double mean = 0.5 * (hxx + hyy);
    double disc = std::sqrt(0.25 * (hxx - hyy) * (hxx - hyy) + hxy * hxy);
    double lo = mean - disc, hi = mean + disc;
    int index = (lo < 0) + (hi < 0);
    CriticalPoint cp;
    cp.pos = z;
    cp.index = index;
    cp.f_value = sys.cover_height(z.x, z.y);
    cp.hess_det = det;
    cp.eig_lo = lo;
    cp.eig_hi = hi;
    cp.unstable_dir = detail::symmetric_eigvec(hxx, hxy, hyy, lo);
    cps.push_back(cp);
  }
  std::sort(cps.begin(), cps.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.index != b.index) return a.index < b.index;
    if (std::abs(a.pos.x - b.pos.x) > 1e-9) return a.pos.x < b.pos.x;
    return a.pos.y < b.pos.y;
  });
  return cps;
}

/// Where a downward trajectory ends.
struct LandingOutcome {
  enum class Kind { Min, Deep, Lost };
  Kind kind = Kind::Lost;
  int target = -1;  // critical point id for Min
  long deck = 0;    // deck index k of the landing copy

  friend bool operator==(const LandingOutcome& a, const LandingOutcome& b) {
    return a.kind == b.kind && a.target == b.target && a.deck == b.deck;
  }
  friend bool operator!=(const LandingOutcome& a, const LandingOutcome& b) { return !(a == b); }
};

/// Near-saddle passage bookkeeping: closest approach to a saddle copy.
struct SaddleHit {
  int saddle;
  long deck;
  double dist;
  int side;      // sign of <z - q, unstable_dir> at closest approach
  double f_at;   // cover height at closest approach
};

struct ShotResult {
  LandingOutcome outcome;
  std::vector<SaddleHit> hits;
  double time = 0;
  Vec2 end_cover;  // (xt, y)
};

/// Downward shooting in the cyclic cover for one source system: integrates
/// -(grad F + perturbation) with fixed-step RK4, tracking saddle passages and
/// stopping in the rho1-ball of a minimum copy or below the depth horizon.
class TorusShooter {
 public:
  TorusShooter(TorusMorseSystem sys, std::vector<CriticalPoint> cps, long horizon,
               double step = 1e-3)
      : sys_(sys), cps_(std::move(cps)), horizon_(horizon), h_(step) {
    double fmin = 1e300;
    for (const auto& cp : cps_) fmin = std::min(fmin, cp.f_value);
    f_stop_ = fmin - static_cast<double>(horizon_) - 1.2;
    for (std::size_t i = 0; i < cps_.size(); ++i) {
      if (cps_[i].index == 1) saddles_.push_back(static_cast<int>(i));
      if (cps_[i].index == 0) minima_.push_back(static_cast<int>(i));
    }
  }

  const TorusMorseSystem& system() const { return sys_; }
  const std::vector<CriticalPoint>& points() const { return cps_; }
  const std::vector<int>& saddles() const { return saddles_; }
  const std::vector<int>& minima() const { return minima_; }
  long horizon() const { return horizon_; }
  double step() const { return h_; }
  double launch_radius() const { return rho0_; }
  double landing_radius() const { return rho1_; }

  /// Extra field added to grad F before descending (C0 perturbation).
  void set_perturbation(std::function<Vec2(double, double)> p) { perturbation_ = std::move(p); }
  bool perturbed() const { return static_cast<bool>(perturbation_); }

  /// Fan ray start for an index-2 source: angle theta in the (downhill)
  /// tangent plane, launched at radius rho0 from the lift shifted by
  /// lift_offset decks.
  ShotResult shoot_ray(int source, double theta, long lift_offset = 0) const {
    const CriticalPoint& p = cps_[static_cast<std::size_t>(source)];
    if (p.index != 2) throw invalid_params("fan shooting needs an index-2 source");
    Vec2 start{p.pos.x - static_cast<double>(lift_offset) + rho0_ * std::cos(theta),
               p.pos.y + rho0_ * std::sin(theta)};
    return shoot(start);
  }

  /// Branch start for an index-1 source: direction +-1 along the unstable
  /// eigenvector.
  ShotResult shoot_branch(int source, int direction, long lift_offset = 0) const {
    const CriticalPoint& q = cps_[static_cast<std::size_t>(source)];
    if (q.index != 1) throw invalid_params("branch shooting needs an index-1 source");
    double s = direction >= 0 ? 1.0 : -1.0;
    Vec2 start{q.pos.x - static_cast<double>(lift_offset) + s * rho0_ * q.unstable_dir.x,
               q.pos.y + s * rho0_ * q.unstable_dir.y};
    return shoot(start);
  }

  /// Integrate downward from a cover point (xt, y).
  ShotResult shoot(Vec2 start) const {
    ShotResult res;
    Vec2 z = start;
    double t = 0;
    const double t_max = 600;
    const long max_steps = static_cast<long>(t_max / h_);
    for (long step = 0; step < max_steps; ++step) {
      if (step % check_stride_ == 0) {
        if (check_landing(z, res)) {
          res.time = t;
          res.end_cover = z;
          return res;
        }
        if (sys_.cover_height(z.x, z.y) < f_stop_) {
          res.outcome = {LandingOutcome::Kind::Deep, -1, 0};
          res.time = t;
          res.end_cover = z;
          return res;
        }
      }
      z = rk4(z);
      t += h_;
    }
    res.outcome = {LandingOutcome::Kind::Lost, -1, 0};
    res.time = t;
    res.end_cover = z;
    return res;
  }

 private:
  Vec2 rhs(Vec2 z) const {
    Vec2 g = sys_.gradient(wrap01(z.x), z.y);
    if (perturbation_) {
      Vec2 b = perturbation_(wrap01(z.x), wrap01(z.y));
      g.x += b.x;
      g.y += b.y;
    }
    return {-g.x, -g.y};
  }

  Vec2 rk4(Vec2 z) const {
    Vec2 k1 = rhs(z);
    Vec2 k2 = rhs({z.x + 0.5 * h_ * k1.x, z.y + 0.5 * h_ * k1.y});
    Vec2 k3 = rhs({z.x + 0.5 * h_ * k2.x, z.y + 0.5 * h_ * k2.y});
    Vec2 k4 = rhs({z.x + h_ * k3.x, z.y + h_ * k3.y});
    return {z.x + h_ / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
            z.y + h_ / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y)};
  }

  /// Min-ball landing test plus saddle-passage bookkeeping.
  bool check_landing(Vec2 z, ShotResult& res) const {
    for (std::size_t i = 0; i < cps_.size(); ++i) {
      const CriticalPoint& cp = cps_[i];
      if (cp.index == 2) continue;
      double k = std::round(cp.pos.x - z.x);
      double dx = z.x - (cp.pos.x - k);
      double dy = wrap_diff(z.y - cp.pos.y);
      double d2 = dx * dx + dy * dy;
      if (d2 > rho1_ * rho1_) continue;
      if (cp.index == 0) {
        res.outcome = {LandingOutcome::Kind::Min, static_cast<int>(i), static_cast<long>(k)};
        return true;
      }
      // saddle passage: keep the closest approach per (saddle, deck)
      double d = std::sqrt(d2);
      double proj = dx * cp.unstable_dir.x + dy * cp.unstable_dir.y;
      int side = proj >= 0 ? 1 : -1;
      double f_here = sys_.cover_height(z.x, z.y);
      bool found = false;
      for (auto& hit : res.hits)
        if (hit.saddle == static_cast<int>(i) && hit.deck == static_cast<long>(k)) {
          found = true;
          if (d < hit.dist) {
            hit.dist = d;
            hit.side = side;
            hit.f_at = f_here;
          }
          break;
        }
      if (!found)
        res.hits.push_back({static_cast<int>(i), static_cast<long>(k), d, side, f_here});
    }
    return false;
  }

  TorusMorseSystem sys_;
  std::vector<CriticalPoint> cps_;
  std::vector<int> saddles_;
  std::vector<int> minima_;
  long horizon_;
  double h_;
  double f_stop_;
  double rho0_ = 1e-4;
  double rho1_ = 1e-3;
  int check_stride_ = 4;
  std::function<Vec2(double, double)> perturbation_;
};

}  // namespace novikov

#endif

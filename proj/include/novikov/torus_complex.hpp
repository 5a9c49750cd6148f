#ifndef NOVIKOV_TORUS_COMPLEX_HPP
#define NOVIKOV_TORUS_COMPLEX_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "novikov/errors.hpp"
#include "novikov/growth.hpp"
#include "novikov/laurent_series.hpp"
#include "novikov/novikov_rational.hpp"
#include "novikov/recurrence_fit.hpp"
#include "novikov/torus_morse.hpp"

namespace novikov {

/// One connecting orbit from an index-2 fan into a saddle copy, located as a
/// basin boundary of the fan parameter.
struct FanSeparatrix {
  double theta;
  int saddle;
  long deck;
  int sign;  // +1 when rays just above theta pass the saddle on its +unstable side
};

struct FanCensus {
  int source;
  long lift_offset;
  std::vector<double> ray_angles;
  std::vector<LandingOutcome> ray_outcomes;
  std::vector<FanSeparatrix> separatrices;
};

/// Signed flow-line counts from one source to one target, by deck index
/// relative to the chosen lifts (canonical representative shifted by
/// target_lift decks for the target).
struct FlowLineCount {
  int source;
  int target;
  long target_lift = 0;
  std::map<long, long> n;
};

namespace detail {

/// The separatrix saddle of a refined bracket: the shallowest saddle copy
/// both endpoint trajectories pass within the landing radius but on opposite
/// sides.  Returns the hit seen from the upper endpoint.
inline std::optional<SaddleHit> split_saddle(const ShotResult& lo, const ShotResult& hi) {
  std::optional<SaddleHit> best;
  for (const auto& ha : lo.hits)
    for (const auto& hb : hi.hits)
      if (ha.saddle == hb.saddle && ha.deck == hb.deck && ha.side != hb.side)
        if (!best || hb.f_at > best->f_at) best = hb;
  return best;
}

struct RawBoundary {
  double theta_lo, theta_hi;
  ShotResult shot_lo, shot_hi;
};

inline void refine_boundary(const TorusShooter& shooter, int source, long lift_offset,
                            double th_lo, double th_hi, ShotResult lo, ShotResult hi,
                            std::vector<RawBoundary>& out, int depth = 0) {
  if (depth > 64) throw unresolved_orbit("fan boundary refinement exceeded depth budget");
  if (th_hi - th_lo < 1e-9) {
    out.push_back({th_lo, th_hi, std::move(lo), std::move(hi)});
    return;
  }
  double mid = 0.5 * (th_lo + th_hi);
  ShotResult sm = shooter.shoot_ray(source, mid, lift_offset);
  if (sm.outcome == lo.outcome) {
    refine_boundary(shooter, source, lift_offset, mid, th_hi, std::move(sm), std::move(hi), out,
                    depth + 1);
  } else if (sm.outcome == hi.outcome) {
    refine_boundary(shooter, source, lift_offset, th_lo, mid, std::move(lo), std::move(sm), out,
                    depth + 1);
  } else {
    // previously unseen basin inside the bracket
    ShotResult sm2 = sm;
    refine_boundary(shooter, source, lift_offset, th_lo, mid, std::move(lo), std::move(sm), out,
                    depth + 1);
    refine_boundary(shooter, source, lift_offset, mid, th_hi, std::move(sm2), std::move(hi), out,
                    depth + 1);
  }
}

}  // namespace detail

/// Fan survey of an index-2 source: shoot `rays` downward rays, then refine
/// every basin boundary to a 1e-9 bracket in the ray parameter and identify
/// the saddle each boundary orbit converges to.  Boundaries between two
/// beyond-horizon basins are skipped.
inline FanCensus fan_census(const TorusShooter& shooter, int source, int rays,
                            long lift_offset = 0) {
  if (rays < 8) throw invalid_params("need at least 8 rays");
  FanCensus census;
  census.source = source;
  census.lift_offset = lift_offset;

  std::vector<ShotResult> shots;
  shots.reserve(static_cast<std::size_t>(rays));
  for (int i = 0; i < rays; ++i) {
    double theta = 2 * std::numbers::pi * (i + 0.5) / rays;
    census.ray_angles.push_back(theta);
    shots.push_back(shooter.shoot_ray(source, theta, lift_offset));
    census.ray_outcomes.push_back(shots.back().outcome);
  }

  std::vector<detail::RawBoundary> raw;
  struct Segment {
    double th_lo, th_hi;
    ShotResult lo, hi;
    int probes_left;
  };
  std::vector<Segment> queue;
  for (int i = 0; i < rays; ++i) {
    int j = (i + 1) % rays;
    double th_lo = census.ray_angles[i];
    double th_hi = j == 0 ? census.ray_angles[j] + 2 * std::numbers::pi : census.ray_angles[j];
    queue.push_back({th_lo, th_hi, shots[i], shots[j], 2});
  }
  while (!queue.empty()) {
    Segment seg = std::move(queue.back());
    queue.pop_back();
    if (seg.lo.outcome == seg.hi.outcome) {
      // same basin at both ends; probe the midpoint a bounded number of
      // times when the landing points disagree enough to hint at a hidden
      // basin between them
      double dx = seg.lo.end_cover.x - seg.hi.end_cover.x;
      double dy = wrap_diff(seg.lo.end_cover.y - seg.hi.end_cover.y);
      if (seg.probes_left <= 0 || dx * dx + dy * dy < 0.0625) continue;
      double mid = 0.5 * (seg.th_lo + seg.th_hi);
      ShotResult sm = shooter.shoot_ray(source, mid, lift_offset);
      ShotResult sm2 = sm;
      queue.push_back({seg.th_lo, mid, std::move(seg.lo), std::move(sm), seg.probes_left - 1});
      queue.push_back({mid, seg.th_hi, std::move(sm2), std::move(seg.hi), seg.probes_left - 1});
      continue;
    }
    bool deep_lo = seg.lo.outcome.kind != LandingOutcome::Kind::Min;
    bool deep_hi = seg.hi.outcome.kind != LandingOutcome::Kind::Min;
    if (deep_lo && deep_hi) continue;
    detail::refine_boundary(shooter, source, lift_offset, seg.th_lo, seg.th_hi, seg.lo, seg.hi,
                            raw);
  }

  // merge brackets converging to the same orbit (clustering gap 1e-6), then
  // identify the saddle from the outermost endpoints of each cluster
  std::sort(raw.begin(), raw.end(),
            [](const detail::RawBoundary& a, const detail::RawBoundary& b) {
              return a.theta_lo < b.theta_lo;
            });
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t j = i;
    while (j + 1 < raw.size() && raw[j + 1].theta_lo - raw[j].theta_hi < 1e-6) ++j;
    const ShotResult& lo = raw[i].shot_lo;
    const ShotResult& hi = raw[j].shot_hi;
    auto hit = detail::split_saddle(lo, hi);
    if (!hit)
      throw unresolved_orbit("fan boundary does not resolve to a single saddle passage");
    if (hit->deck - lift_offset <= shooter.horizon())
      census.separatrices.push_back(
          {0.5 * (raw[i].theta_lo + raw[j].theta_hi), hit->saddle, hit->deck, hit->side});
    i = j + 1;
  }
  return census;
}

/// Signed counts of index-2 -> index-1 connecting orbits from a fan census.
inline FlowLineCount counts_from_census(const FanCensus& census, int target,
                                        long target_lift = 0) {
  FlowLineCount c;
  c.source = census.source;
  c.target = target;
  c.target_lift = target_lift;
  for (const auto& sep : census.separatrices)
    if (sep.saddle == target) c.n[sep.deck - census.lift_offset - target_lift] += sep.sign;
  for (auto it = c.n.begin(); it != c.n.end();)
    it = it->second == 0 ? c.n.erase(it) : std::next(it);
  return c;
}

/// Signed counts of index-1 -> index-0 connecting orbits: the two unstable
/// branches of the saddle, the +branch counting +1 and the -branch -1.
inline FlowLineCount counts_from_branches(const TorusShooter& shooter, int saddle, int target,
                                          long lift_offset = 0, long target_lift = 0) {
  FlowLineCount c;
  c.source = saddle;
  c.target = target;
  c.target_lift = target_lift;
  for (int dir : {+1, -1}) {
    ShotResult res = shooter.shoot_branch(saddle, dir, lift_offset);
    if (res.outcome.kind != LandingOutcome::Kind::Min)
      throw unresolved_orbit("saddle branch did not land in a minimum ball");
    if (res.outcome.target == target) c.n[res.outcome.deck - lift_offset - target_lift] += dir;
  }
  for (auto it = c.n.begin(); it != c.n.end();)
    it = it->second == 0 ? c.n.erase(it) : std::next(it);
  return c;
}

/// General signed count entry point for a source/target pair with adjacent
/// indices; the index must drop by exactly one.
inline FlowLineCount count_flow_lines(const TorusShooter& shooter, int source, int target,
                                      int rays = 256) {
  const auto& cps = shooter.points();
  const CriticalPoint& p = cps[static_cast<std::size_t>(source)];
  const CriticalPoint& q = cps[static_cast<std::size_t>(target)];
  if (p.index != q.index + 1)
    throw invalid_params("flow-line counting requires index(source) = index(target) + 1");
  if (p.index == 2) return counts_from_census(fan_census(shooter, source, rays), target);
  return counts_from_branches(shooter, source, target);
}

/// Counted series of one boundary entry: window [k_lo, horizon] where k_lo is
/// the smallest deck index allowed by the height drop between the canonical
/// lifts (everything below is structurally zero).
inline LaurentSeries entry_series(const FlowLineCount& c, const TorusShooter& shooter) {
  const auto& cps = shooter.points();
  double drop = cps[static_cast<std::size_t>(c.target)].f_value -
                static_cast<double>(c.target_lift) -
                cps[static_cast<std::size_t>(c.source)].f_value;
  long k_lo = static_cast<long>(std::floor(drop)) + 1;
  long k_hi = shooter.horizon() - c.target_lift;
  for (const auto& [k, v] : c.n)
    if (k < k_lo)
      throw unresolved_orbit("count recorded below the height-drop floor");
  std::vector<Int> coeffs;
  for (long k = k_lo; k <= k_hi; ++k) {
    auto it = c.n.find(k);
    coeffs.emplace_back(it == c.n.end() ? 0 : it->second);
  }
  return LaurentSeries(k_lo, std::move(coeffs));
}

/// Boundary-matrix entry: counted series plus, when the window supports it,
/// an exact rational reconstruction checked against two held-out terms.
struct NovikovMatrixEntry {
  FlowLineCount count;
  LaurentSeries counted;
  std::optional<NovikovRational> fitted;
  bool prediction_ok = false;  // fitted reproduces the two held-out coefficients
  double sigma = 0;            // growth estimate of the fitted entry
};

struct NovikovAssembly {
  std::vector<CriticalPoint> points;
  std::vector<int> maxima, saddles, minima;
  // d2[s][m]: saddle row s, maximum column m;  d1[v][s]: minimum row v
  std::vector<std::vector<NovikovMatrixEntry>> d2;
  std::vector<std::vector<NovikovMatrixEntry>> d1;
};

namespace detail {

inline NovikovMatrixEntry make_entry(FlowLineCount count, const TorusShooter& shooter,
                                     std::size_t max_deg_cap) {
  NovikovMatrixEntry e;
  e.count = std::move(count);
  e.counted = entry_series(e.count, shooter);
  std::size_t terms = e.counted.truncation();
  if (terms == 0) {
    // identically zero window collapses under canonicalization
    e.fitted = NovikovRational::zero();
    e.prediction_ok = true;
    e.sigma = 0;
  } else if (terms >= 4) {
    // hold out the last two coefficients, fit the rest, then predict
    LaurentSeries head(e.counted.lead(),
                       std::vector<Int>(e.counted.coeffs().begin(),
                                        e.counted.coeffs().end() - 2));
    std::size_t max_deg = std::min(max_deg_cap, (head.truncation() - 2) / 2);
    auto fit = fit_rational(head, max_deg);
    if (fit) {
      e.fitted = fit;
      long limit = e.counted.order_limit();
      long start = -static_cast<long>(fit->shift());
      std::size_t need = static_cast<std::size_t>(std::max<long>(0, limit - start));
      LaurentSeries re = expand_rational(*fit, need);
      e.prediction_ok = true;
      for (long k = e.counted.order_limit() - 2; k < limit; ++k)
        if (!re.knows(k) || re.coeff(k) != e.counted.coeff(k)) e.prediction_ok = false;
      e.sigma = growth_estimate(*fit);
    }
  }
  return e;
}

}  // namespace detail

/// Count every adjacent-index pair and assemble the two boundary matrices.
inline NovikovAssembly assemble_novikov(const TorusShooter& shooter, int rays = 256) {
  NovikovAssembly a;
  a.points = shooter.points();
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (a.points[i].index == 0) a.minima.push_back(static_cast<int>(i));
    if (a.points[i].index == 1) a.saddles.push_back(static_cast<int>(i));
    if (a.points[i].index == 2) a.maxima.push_back(static_cast<int>(i));
  }
  std::size_t cap = a.points.size();

  a.d2.assign(a.saddles.size(), {});
  for (auto& row : a.d2) row.resize(a.maxima.size());
  for (std::size_t mc = 0; mc < a.maxima.size(); ++mc) {
    FanCensus census = fan_census(shooter, a.maxima[mc], rays);
    for (std::size_t sr = 0; sr < a.saddles.size(); ++sr)
      a.d2[sr][mc] = detail::make_entry(counts_from_census(census, a.saddles[sr]), shooter, cap);
  }

  a.d1.assign(a.minima.size(), {});
  for (auto& row : a.d1) row.resize(a.saddles.size());
  for (std::size_t sc = 0; sc < a.saddles.size(); ++sc)
    for (std::size_t vr = 0; vr < a.minima.size(); ++vr)
      a.d1[vr][sc] = detail::make_entry(counts_from_branches(shooter, a.saddles[sc], a.minima[vr]),
                                        shooter, cap);
  return a;
}

struct DSquaredReport {
  bool ok = true;
  long order_checked = 0;
  // (min row, max column) pairs with a nonzero composite entry
  std::vector<std::pair<int, int>> failures;
};

/// d1 * d2 must vanish coefficientwise as truncated Laurent series up to the
/// requested order.
inline DSquaredReport check_d_squared(const NovikovAssembly& a, long order) {
  DSquaredReport rep;
  rep.order_checked = order;
  for (std::size_t vr = 0; vr < a.minima.size(); ++vr) {
    for (std::size_t mc = 0; mc < a.maxima.size(); ++mc) {
      LaurentSeries sum(0, {});
      bool first = true;
      for (std::size_t s = 0; s < a.saddles.size(); ++s) {
        LaurentSeries term = series_mul(a.d1[vr][s].counted, a.d2[s][mc].counted);
        sum = first ? term : sum + term;
        first = false;
      }
      bool zero = true;
      for (long k = sum.lead(); k <= std::min(order, sum.order_limit() - 1); ++k)
        if (sum.knows(k) && sum.coeff(k) != 0) zero = false;
      if (!zero) {
        rep.ok = false;
        rep.failures.emplace_back(static_cast<int>(vr), static_cast<int>(mc));
      }
    }
  }
  return rep;
}

/// Smooth deck-invariant perturbation supported away from the critical
/// points: vanishes on their rho2-balls, has sup norm <= delta.
inline std::function<Vec2(double, double)> offset_bump(const std::vector<CriticalPoint>& cps,
                                                       double delta, double rho2 = 0.05) {
  auto envelope = [cps, rho2](double x, double y) {
    double e = 1.0;
    for (const auto& cp : cps) {
      double dx = wrap_diff(x - cp.pos.x), dy = wrap_diff(y - cp.pos.y);
      double d = std::hypot(dx, dy);
      double s = d <= rho2 ? 0.0 : (d >= 2 * rho2 ? 1.0 : (d - rho2) / rho2);
      // smooth cutoff rising 0 -> 1 on [rho2, 2 rho2]
      if (s > 0 && s < 1) {
        double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
        s = a / (a + b);
      }
      e *= s;
      if (e == 0) return 0.0;
    }
    return e;
  };
  const double w = 2 * std::numbers::pi;
  return [envelope, delta, w](double x, double y) {
    double e = delta * envelope(x, y);
    double ux = std::sin(w * (y + 0.13)), uy = std::cos(w * (x - 0.37));
    double n = std::hypot(ux, uy);
    if (n < 1e-12) return Vec2{0, 0};
    return Vec2{e * ux / n, e * uy / n};
  };
}

struct RecountComparison {
  bool identical = true;
  long order_compared = 0;
  struct Difference {
    int source, target;
    long k;
    long base, perturbed;
  };
  std::vector<Difference> differences;
};

/// Recount all boundary entries under a perturbed field and compare
/// coefficients up to the given order.
inline RecountComparison compare_counts(const NovikovAssembly& base,
                                        const NovikovAssembly& other, long order) {
  RecountComparison cmp;
  cmp.order_compared = order;
  auto compare_block = [&](const std::vector<std::vector<NovikovMatrixEntry>>& a,
                           const std::vector<std::vector<NovikovMatrixEntry>>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a[i].size(); ++j) {
        const auto& ca = a[i][j].count;
        const auto& cb = b[i][j].count;
        for (long k = -2; k <= order; ++k) {
          auto ita = ca.n.find(k);
          auto itb = cb.n.find(k);
          long va = ita == ca.n.end() ? 0 : ita->second;
          long vb = itb == cb.n.end() ? 0 : itb->second;
          if (va != vb) {
            cmp.identical = false;
            cmp.differences.push_back({ca.source, ca.target, k, va, vb});
          }
        }
      }
  };
  compare_block(base.d2, other.d2);
  compare_block(base.d1, other.d1);
  return cmp;
}

}  // namespace novikov

#endif

// Acceptance suite: every quantitative guarantee the library makes, each run
// at its stated tolerance with a runtime cap, one PASS/FAIL line per
// criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "novikov/a_construction.hpp"
#include "novikov/growth.hpp"
#include "novikov/model_flow.hpp"
#include "novikov/novikov_rational.hpp"
#include "novikov/ode.hpp"
#include "novikov/recurrence_fit.hpp"
#include "novikov/stability.hpp"
#include "novikov/torus_complex.hpp"
#include "novikov/torus_morse.hpp"
#include "novikov/transfer.hpp"
#include "oracles.hpp"

using namespace novikov;

namespace {

int failures = 0;

struct Criterion {
  const char* name;
  double time_cap_s;
  bool (*run)(std::string& detail);
};

ModelPoint random_model_point(std::mt19937_64& rng, std::size_t n, double radius) {
  std::uniform_int_distribution<std::size_t> kd(0, n);
  std::normal_distribution<double> gauss(0, 1);
  for (;;) {
    std::size_t k = kd(rng);
    ModelPoint z;
    z.x.resize(k);
    z.y.resize(n - k);
    double s = 0;
    for (auto& v : z.x) {
      v = gauss(rng);
      s += v * v;
    }
    for (auto& v : z.y) {
      v = gauss(rng);
      s += v * v;
    }
    if (s == 0) continue;
    double scale = radius / std::sqrt(s);
    for (auto& v : z.x) v *= scale;
    for (auto& v : z.y) v *= scale;
    return z;
  }
}

// 1. rational form of the matrix series vs direct power iteration
bool crit_oracle_equivalence(std::string& detail) {
  std::mt19937_64 rng(20250801);
  std::uniform_int_distribution<std::size_t> rd(1, 6);
  std::uniform_int_distribution<long> ed(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = rd(rng);
    std::vector<Int> entries(r * r), lam(r), p(r);
    for (auto& v : entries) v = ed(rng);
    for (auto& v : lam) v = ed(rng);
    for (auto& v : p) v = ed(rng);
    Endomorphism a(r, entries);
    NovikovRational rat = generating_series(a, lam, p);
    if (rat.denominator().constant_coeff() != 1) {
      detail = "Q(0) != 1 at trial " + std::to_string(trial);
      return false;
    }
    LaurentSeries expanded = expand_rational(rat, 20);
    LaurentSeries direct = brute_force_series(a, lam, p, 20);
    for (long k = 0; k < 20; ++k)
      if (expanded.coeff(k) != direct.coeff(k)) {
        detail = "coefficient mismatch at trial " + std::to_string(trial) + ", k = " +
                 std::to_string(k);
        return false;
      }
  }
  detail = "200 random systems, 20 terms each, exact agreement";
  return true;
}

// 2. expand -> fit round trip
bool crit_round_trip(std::string& detail) {
  std::mt19937_64 rng(20250802);
  std::uniform_int_distribution<long> md(0, 3);
  int done = 0;
  while (done < 100) {
    IntPoly p = oracles::random_poly(rng, 5, 10, true);
    IntPoly q = oracles::random_denominator(rng, 5, 10);
    NovikovRational r(p, md(rng), q);
    if (r.is_zero()) continue;
    auto back = fit_rational(expand_rational(r, 24), 5);
    if (!back || !(*back == r)) {
      detail = "round trip failed at sample " + std::to_string(done);
      return false;
    }
    ++done;
  }
  detail = "100 random rationals reconstructed exactly from 24 terms";
  return true;
}

// 3. annulus residence bound, and the halving-cost constant
bool crit_annulus(std::string& detail) {
  if (!(lln(2.0) <= 8.0)) {
    detail = "per-annulus cost exceeds 8";
    return false;
  }
  std::mt19937_64 rng(20250803);
  std::uniform_real_distribution<double> rad(0.2, 2.0);
  std::uniform_real_distribution<double> ratio(1.1, 4.0);
  std::uniform_int_distribution<std::size_t> nd(1, 6);
  double worst = 1e300;
  int done = 0;
  while (done < 1000) {
    double r = rad(rng), R = r * ratio(rng);
    ModelPoint z = random_model_point(rng, nd(rng), rad(rng) * R);
    try {
      ResidenceResult res = annulus_residence(z, {R, r});
      double slack = lln(R / r) - res.time;
      worst = std::min(worst, slack);
      if (slack < -1e-9) {
        detail = "time bound violated, slack " + std::to_string(slack);
        return false;
      }
      if (res.length > 2 * R + 1e-9) {
        detail = "length bound violated";
        return false;
      }
      ++done;
    } catch (const no_intersection&) {
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "1000 trajectories, worst slack %.3e; ln(4+sqrt(15)) = %.4f <= 8", worst,
                lln(2.0));
  detail = buf;
  return true;
}

// 4. lens residence bound
bool crit_lens(std::string& detail) {
  std::mt19937_64 rng(20250804);
  std::uniform_real_distribution<double> rad(0.1, 3.0);
  std::uniform_int_distribution<std::size_t> nd(2, 6);
  double worst = 1e300;
  int done = 0;
  while (done < 1000) {
    ModelPoint z = random_model_point(rng, nd(rng), rad(rng));
    try {
      double t = lens_residence(z, rad(rng));
      worst = std::min(worst, 2.0 - t);
      if (t > 2.0 + 1e-9) {
        detail = "lens bound violated: " + std::to_string(t);
        return false;
      }
      ++done;
    } catch (const no_intersection&) {
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "1000 trajectories, worst slack %.3e", worst);
  detail = buf;
  return true;
}

// 5. rescaled-field shell residence
bool crit_aconstruction(std::string& detail) {
  std::mt19937_64 rng(20250805);
  std::uniform_real_distribution<double> rd(0.5, 2.0), mud(0.15, 0.45), gd(1.0, 4.0),
      bd(0.3, 2.0), dd(1.0, 3.0), sd(0.0, 1.0);
  double worst = 1e300;
  for (int ps = 0; ps < 5; ++ps) {
    AConstructionParams p{};
    p.r = rd(rng);
    p.mu = p.r * mud(rng);
    p.gamma = gd(rng);
    p.field_norm = bd(rng);
    p.distortion = dd(rng);
    p.delta = select_delta(p.r, p.mu, p.field_norm, p.distortion);
    p.validate();
    for (int i = 0; i < 200; ++i) {
      double rho = p.mu + (p.r - p.mu) * sd(rng);
      ModelPoint z = random_model_point(rng, 3, rho);
      double t = a_field_residence(p, z);
      double slack = p.residence_bound() - t;
      worst = std::min(worst, slack);
      if (slack < -1e-6) {
        detail = "shell residence exceeded 3Dr/B, slack " + std::to_string(slack);
        return false;
      }
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "5 parameter sets x 200 starts, worst slack %.3e", worst);
  detail = buf;
  return true;
}

// 6. separation bound: equality case and random nonlinear pairs
bool crit_gronwall(std::string& detail) {
  double D = 1.0, alpha = 0.5;
  FieldSpec u{1, [D](const Vec& z) { return Vec{D * z[0]}; }, D, 100.0};
  FieldSpec w{1, [D, alpha](const Vec& z) { return Vec{D * z[0] + alpha}; }, D, 100.0};
  for (double T : {0.5, 1.0, 2.0, 3.0}) {
    TrajectoryRecord a = integrate_ivp(u, {1.0}, T, 1e-3);
    TrajectoryRecord b = integrate_ivp(w, {1.0}, T, 1e-3);
    double measured = vec_dist(a.back(), b.back());
    double exact = alpha / D * (std::exp(D * T) - 1);
    if (std::abs(measured - exact) / exact > 1e-6) {
      detail = "equality case off at t = " + std::to_string(T);
      return false;
    }
  }
  std::mt19937_64 rng(20250806);
  std::uniform_real_distribution<double> cd(-0.3, 0.3), xd(-0.5, 0.5), sdist(0.6, 1.4);
  for (int trial = 0; trial < 50; ++trial) {
    double c1 = cd(rng), c2 = cd(rng), s = sdist(rng);
    double lip = (std::abs(c1) + std::abs(c2)) / s + 1.0;
    FieldSpec uu{2,
                 [=](const Vec& z) {
                   return Vec{-z[1] + c1 * std::sin(z[0] / s), z[0] + c2 * std::sin(z[1] / s)};
                 },
                 lip, 8.0};
    double amp = 1e-3;
    FieldSpec ww{2,
                 [=](const Vec& z) {
                   return Vec{-z[1] + c1 * std::sin(z[0] / s) + amp * std::cos(z[1]),
                              z[0] + c2 * std::sin(z[1] / s) - amp * std::sin(z[0])};
                 },
                 lip + amp, 8.0};
    Vec x0{xd(rng), xd(rng)};
    Vec y0{x0[0] + 1e-4, x0[1] - 1e-4};
    SeparationReport rep = separation_check(uu, ww, x0, y0, 2.0, 1e-3, 32);
    if (!rep.ok) {
      detail = "nonlinear pair exceeded the bound at t = " + std::to_string(rep.worst_t);
      return false;
    }
  }
  detail = "scalar equality case to 1e-6 relative; 50 nonlinear pairs below bound";
  return true;
}

// 7. torus demonstration end to end
bool crit_torus(std::string& detail) {
  TorusMorseSystem sys{1.3};
  auto cps = find_critical_points(sys);
  int chi = 0;
  for (const auto& cp : cps) chi += cp.index == 1 ? -1 : 1;
  if (cps.empty() || chi != 0) {
    detail = "critical set empty or not Euler-balanced";
    return false;
  }
  TorusShooter shooter(sys, cps, 9, 1e-3);
  NovikovAssembly a = assemble_novikov(shooter, 256);

  DSquaredReport rep = check_d_squared(a, 6);
  if (!rep.ok) {
    detail = "d1 d2 != 0";
    return false;
  }

  int fitted_entries = 0;
  auto check_entry = [&](const NovikovMatrixEntry& e) {
    if (e.counted.truncation() < 8) return true;  // not enough stable terms to judge
    if (!e.fitted) return false;
    if (e.fitted->denominator().constant_coeff() != 1) return false;
    if (!e.prediction_ok) return false;
    int d = e.fitted->denominator().degree();
    double c = e.fitted->numerator().abs_coeff_sum().get_d() *
               std::pow(e.fitted->denominator().abs_coeff_sum().get_d(), d);
    for (long k = e.counted.lead(); k < e.counted.order_limit(); ++k) {
      double bound = d == 0 ? c
                            : c * std::pow(e.sigma * (1 + 1e-9) + 1e-12, double(k)) *
                                  std::pow(double(k + 1), d);
      if (Int(abs(e.counted.coeff(k))).get_d() > bound * (1 + 1e-9)) return false;
    }
    ++fitted_entries;
    return true;
  };
  for (const auto& row : a.d2)
    for (const auto& e : row)
      if (!check_entry(e)) {
        detail = "a d2 entry failed its fit/growth obligations";
        return false;
      }
  for (const auto& row : a.d1)
    for (const auto& e : row)
      if (!check_entry(e)) {
        detail = "a d1 entry failed its fit/growth obligations";
        return false;
      }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "8 critical points, chi = 0, d^2 = 0 to order 6, %d entries fitted with two "
                "held-out terms predicted",
                fitted_entries);
  detail = buf;
  return true;
}

// 8. count stability: off-support bump and step halving
bool crit_count_stability(std::string& detail) {
  TorusMorseSystem sys{1.3};
  auto cps = find_critical_points(sys);
  TorusShooter base(sys, cps, 9, 1e-3);
  NovikovAssembly a = assemble_novikov(base, 256);

  TorusShooter pert(sys, cps, 9, 1e-3);
  pert.set_perturbation(offset_bump(cps, 1e-3));
  RecountComparison cmp_pert = compare_counts(a, assemble_novikov(pert, 256), 5);
  if (!cmp_pert.identical) {
    detail = "counts moved under a 1e-3 off-support bump";
    return false;
  }

  TorusShooter fine(sys, cps, 9, 5e-4);
  RecountComparison cmp_half = compare_counts(a, assemble_novikov(fine, 256), 5);
  if (!cmp_half.identical) {
    detail = "counts moved under step halving";
    return false;
  }
  detail = "all n_k (k <= 5) invariant under the bump and under h -> h/2";
  return true;
}

void run(const Criterion& c, int idx) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = c.run(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > c.time_cap_s) {
    ok = false;
    detail += " [runtime cap " + std::to_string(c.time_cap_s) + " s exceeded]";
  }
  std::printf("%s criterion %d: %s (%.2f s) - %s\n", ok ? "PASS" : "FAIL", idx, c.name, secs,
              detail.c_str());
  if (!ok) ++failures;
}

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"rational series equals direct power iteration", 10.0, crit_oracle_equivalence},
      {"expand/fit round trip", 5.0, crit_round_trip},
      {"annulus residence bound", 5.0, crit_annulus},
      {"lens residence bound", 5.0, crit_lens},
      {"rescaled-field shell residence bound", 30.0, crit_aconstruction},
      {"separation bound sharpness", 30.0, crit_gronwall},
      {"torus complex: chi, d^2, rational fits, growth", 300.0, crit_torus},
      {"torus counts stable under bump and step halving", 300.0, crit_count_stability},
  };
  int idx = 1;
  for (const auto& c : criteria) run(c, idx++);
  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}

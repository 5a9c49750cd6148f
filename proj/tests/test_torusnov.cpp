#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>

#include "novikov/torus_complex.hpp"
#include "novikov/torus_morse.hpp"

using namespace novikov;

namespace {

const TorusMorseSystem kSys{1.3};

const std::vector<CriticalPoint>& points() {
  static auto cps = find_critical_points(kSys);
  return cps;
}

const TorusShooter& shooter() {
  static TorusShooter s(kSys, points(), 9, 1e-3);
  return s;
}

std::map<long, long> counts(std::initializer_list<std::pair<long, long>> kv) {
  std::map<long, long> m;
  for (auto& [k, v] : kv) m[k] = v;
  return m;
}

}  // namespace

TEST_CASE("critical points of the default system") {
  const auto& cps = points();
  REQUIRE(cps.size() == 8);

  int chi = 0, n_min = 0, n_sad = 0, n_max = 0;
  for (const auto& cp : cps) {
    chi += cp.index == 1 ? -1 : 1;
    n_min += cp.index == 0;
    n_sad += cp.index == 1;
    n_max += cp.index == 2;
    Vec2 g = kSys.gradient(cp.pos.x, cp.pos.y);
    CHECK(std::hypot(g.x, g.y) <= 1e-10);
    CHECK(std::abs(cp.hess_det) >= 1e-6);
  }
  CHECK(chi == 0);
  CHECK(n_min == 2);
  CHECK(n_sad == 4);
  CHECK(n_max == 2);

  // frozen positions: saddles on the vertical circles x = 0, 1/2 and extrema
  // on the horizontal circles y = 0, 1/2, at arccos(+-1/a) angles
  double u = std::acos(1.0 / 1.3) / (2 * std::numbers::pi);  // 0.110320...
  CHECK(cps[0].pos.x == doctest::Approx(u).epsilon(1e-9));
  CHECK(cps[0].pos.y == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(cps[2].pos.x == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(cps[2].pos.y == doctest::Approx(0.5 - u).epsilon(1e-9));
  CHECK(cps[6].pos.x == doctest::Approx(0.5 - u).epsilon(1e-9));
  CHECK(cps[7].f_value == doctest::Approx(1.021884).epsilon(1e-5));
}

TEST_CASE("small amplitude admits no critical points") {
  CHECK(find_critical_points(TorusMorseSystem{0.1}).empty());
  // |g_x| <= a < 1 keeps the x-derivative positive everywhere
  CHECK(find_critical_points(TorusMorseSystem{0.9}).empty());
}

TEST_CASE("Euler characteristic vanishes at every tested amplitude") {
  for (double a : {1.1, 1.3, 1.7, 2.5}) {
    auto cps = find_critical_points(TorusMorseSystem{a});
    CHECK(!cps.empty());
    int chi = 0;
    for (const auto& cp : cps) {
      chi += cp.index == 1 ? -1 : 1;
      Vec2 g = TorusMorseSystem{a}.gradient(cp.pos.x, cp.pos.y);
      CHECK(std::hypot(g.x, g.y) <= 1e-10);
    }
    CHECK(chi == 0);
  }
}

TEST_CASE("unstable shooting: branch pair and fan") {
  // an index-1 source has exactly the two eigenvector rays
  for (int dir : {+1, -1}) {
    ShotResult res = shooter().shoot_branch(2, dir);
    CHECK(res.outcome.kind == LandingOutcome::Kind::Min);
  }
  CHECK_THROWS_AS(shooter().shoot_branch(6, +1), invalid_params);
  CHECK_THROWS_AS(shooter().shoot_ray(2, 0.0), invalid_params);

  // an index-2 fan carries ray_count trajectories; endpoints vary
  // continuously except at the separatrices
  FanCensus census = fan_census(shooter(), 6, 128);
  CHECK(census.ray_angles.size() == 128);
  CHECK(census.ray_outcomes.size() == 128);
  int jumps = 0;
  for (std::size_t i = 0; i < 128; ++i) {
    std::size_t j = (i + 1) % 128;
    if (census.ray_outcomes[i] != census.ray_outcomes[j]) ++jumps;
  }
  CHECK(jumps == static_cast<int>(census.separatrices.size()));
  CHECK(census.separatrices.size() == 4);
}

TEST_CASE("regression: signed counts of the default system") {
  // saddle -> min entries (branch shooting is the oracle; values frozen)
  CHECK(counts_from_branches(shooter(), 2, 0).n == counts({{0, +1}}));
  CHECK(counts_from_branches(shooter(), 2, 1).n == counts({{1, -1}}));
  CHECK(counts_from_branches(shooter(), 3, 0).n == counts({{0, -1}}));
  CHECK(counts_from_branches(shooter(), 3, 1).n == counts({{0, +1}}));
  CHECK(counts_from_branches(shooter(), 4, 0).n == counts({{0, -1}}));
  CHECK(counts_from_branches(shooter(), 4, 1).n == counts({{0, +1}}));
  CHECK(counts_from_branches(shooter(), 5, 0).n == counts({{-1, +1}}));
  CHECK(counts_from_branches(shooter(), 5, 1).n == counts({{0, -1}}));

  // max -> saddle entries through the fan census
  FanCensus c6 = fan_census(shooter(), 6, 128);
  CHECK(counts_from_census(c6, 2).n == counts({{0, -1}}));
  CHECK(counts_from_census(c6, 3).n == counts({{0, -1}}));
  CHECK(counts_from_census(c6, 4).n == counts({{0, +1}}));
  CHECK(counts_from_census(c6, 5).n == counts({{1, +1}}));
  FanCensus c7 = fan_census(shooter(), 7, 128);
  CHECK(counts_from_census(c7, 2).n == counts({{-1, +1}}));
  CHECK(counts_from_census(c7, 3).n == counts({{0, +1}}));
  CHECK(counts_from_census(c7, 4).n == counts({{0, -1}}));
  CHECK(counts_from_census(c7, 5).n == counts({{0, -1}}));

  // index contract
  CHECK_THROWS_AS(count_flow_lines(shooter(), 2, 3), invalid_params);
  CHECK_THROWS_AS(count_flow_lines(shooter(), 6, 0), invalid_params);
}

TEST_CASE("counts are stable under integrator step halving") {
  TorusShooter fine(kSys, points(), 9, 5e-4);
  FanCensus coarse_c = fan_census(shooter(), 7, 96);
  FanCensus fine_c = fan_census(fine, 7, 96);
  for (int s : shooter().saddles())
    CHECK(counts_from_census(coarse_c, s).n == counts_from_census(fine_c, s).n);
  for (int s : shooter().saddles())
    for (int m : shooter().minima())
      CHECK(counts_from_branches(shooter(), s, m).n == counts_from_branches(fine, s, m).n);
}

TEST_CASE("deck equivariance: lifted sources give the same relative counts") {
  FanCensus base = fan_census(shooter(), 7, 96);
  for (long j : {1L, 2L}) {
    FanCensus moved = fan_census(shooter(), 7, 96, j);
    for (int s : shooter().saddles())
      CHECK(counts_from_census(base, s).n == counts_from_census(moved, s).n);
  }
}

TEST_CASE("lift-shift covariance: replacing the target lift multiplies by t") {
  FanCensus base = fan_census(shooter(), 7, 96);
  for (int s : shooter().saddles()) {
    FlowLineCount c0 = counts_from_census(base, s, 0);
    FlowLineCount c1 = counts_from_census(base, s, 1);
    LaurentSeries s0 = entry_series(c0, shooter());
    LaurentSeries s1 = entry_series(c1, shooter());
    // series with target replaced by target * t is t^{-1} times the original
    CHECK(s1.lead() == s0.lead() - 1);
    CHECK(s1.coeffs() == s0.coeffs());
  }
}

TEST_CASE("assembly, rational fits and d-squared") {
  NovikovAssembly a = assemble_novikov(shooter(), 128);
  REQUIRE(a.maxima.size() == 2);
  REQUIRE(a.saddles.size() == 4);
  REQUIRE(a.minima.size() == 2);
  REQUIRE(a.d2.size() == 4);
  REQUIRE(a.d2[0].size() == 2);
  REQUIRE(a.d1.size() == 2);
  REQUIRE(a.d1[0].size() == 4);

  long negative_leads = 0;
  auto check_entry = [&](const NovikovMatrixEntry& e) {
    REQUIRE(e.fitted.has_value());
    CHECK(e.fitted->denominator().constant_coeff() == 1);
    CHECK(e.prediction_ok);
    // the fit reproduces every counted term
    long start = -static_cast<long>(e.fitted->shift());
    std::size_t need =
        static_cast<std::size_t>(std::max<long>(0, e.counted.order_limit() - start));
    LaurentSeries re = expand_rational(*e.fitted, need);
    for (long k = std::min(start, e.counted.lead()); k < e.counted.order_limit(); ++k) {
      REQUIRE(re.knows(k));
      CHECK(re.coeff(k) == e.counted.coeff(k));
    }
    // growth bound on the counted coefficients
    int d = e.fitted->denominator().degree();
    double c = e.fitted->numerator().abs_coeff_sum().get_d() *
               std::pow(e.fitted->denominator().abs_coeff_sum().get_d(), d);
    for (long k = e.counted.lead(); k < e.counted.order_limit(); ++k) {
      double bound = d == 0 ? c
                            : c * std::pow(e.sigma * (1 + 1e-9) + 1e-12, double(k)) *
                                  std::pow(double(k + 1), d);
      CHECK(Int(abs(e.counted.coeff(k))).get_d() <= bound * (1 + 1e-9));
    }
    if (e.counted.lead() < 0 && !e.counted.is_zero_on_window()) ++negative_leads;
    // the height-drop floor: negative decks only when the source lift sits
    // more than one level above the target lift
    const auto& src = a.points[static_cast<std::size_t>(e.count.source)];
    const auto& tgt = a.points[static_cast<std::size_t>(e.count.target)];
    if (src.f_value <= tgt.f_value + 1)
      for (long k = e.counted.lead(); k < 0 && k < e.counted.order_limit(); ++k)
        CHECK(e.counted.coeff(k) == 0);
  };
  for (auto& row : a.d2)
    for (auto& e : row) check_entry(e);
  for (auto& row : a.d1)
    for (auto& e : row) check_entry(e);
  // the default system has exactly two pairs with F(source) > F(target) + 1,
  // both carrying one negative power of t
  CHECK(negative_leads == 2);

  DSquaredReport rep = check_d_squared(a, 6);
  CHECK(rep.ok);
  CHECK(rep.failures.empty());

  // fault injection: flipping one entry's signs must break d^2 = 0
  NovikovAssembly broken = a;
  std::vector<Int> flipped(broken.d2[0][0].counted.coeffs());
  for (auto& v : flipped) v = -v;
  broken.d2[0][0].counted = LaurentSeries(broken.d2[0][0].counted.lead(), std::move(flipped));
  CHECK(!check_d_squared(broken, 6).ok);
}

TEST_CASE("d-squared is vacuous for the empty complex") {
  TorusMorseSystem flat{0.1};
  TorusShooter s(flat, find_critical_points(flat), 6, 1e-3);
  NovikovAssembly a = assemble_novikov(s, 16);
  CHECK(a.points.empty());
  CHECK(check_d_squared(a, 6).ok);
}

TEST_CASE("perturbation bump: support and size") {
  auto bump = offset_bump(points(), 1e-3);
  for (const auto& cp : points()) {
    Vec2 b = bump(cp.pos.x, cp.pos.y);
    CHECK(b.x == 0.0);
    CHECK(b.y == 0.0);
    Vec2 near = bump(cp.pos.x + 0.03, cp.pos.y + 0.02);
    CHECK(std::hypot(near.x, near.y) == 0.0);  // inside the rho2 = 0.05 ball
  }
  for (double x = 0.01; x < 1; x += 0.037)
    for (double y = 0.01; y < 1; y += 0.041) {
      Vec2 b = bump(x, y);
      CHECK(std::hypot(b.x, b.y) <= 1e-3 * (1 + 1e-12));
    }
}

TEST_CASE("regression against the stored JSON fixture") {
  std::ifstream is(std::string(NOVIKOV_DATA_DIR) + "/torus_a1.3_reference.json");
  REQUIRE(is.good());
  nlohmann::json fixture;
  is >> fixture;
  REQUIRE(fixture.at("chi").get<int>() == 0);
  REQUIRE(fixture.at("d_squared_ok").get<bool>());
  REQUIRE(fixture.at("critical_points").size() == 8);

  // recompute at the fixture's configuration and compare every entry
  TorusShooter fix_shooter(kSys, points(), fixture.at("config").at("terms").get<long>(),
                           fixture.at("config").at("step").get<double>());
  NovikovAssembly a = assemble_novikov(fix_shooter, fixture.at("config").at("rays").get<int>());
  std::map<std::pair<int, int>, nlohmann::json> expected;
  for (const auto& rec : fixture.at("counts"))
    expected[{rec.at("source").get<int>(), rec.at("target").get<int>()}] = rec;
  auto check_entry = [&](const NovikovMatrixEntry& e) {
    auto it = expected.find({e.count.source, e.count.target});
    REQUIRE(it != expected.end());
    CHECK(it->second.at("lead").get<long>() == e.counted.lead());
    const auto& coeffs = it->second.at("coeffs");
    REQUIRE(coeffs.size() == e.counted.truncation());
    for (std::size_t i = 0; i < e.counted.truncation(); ++i)
      CHECK(coeffs[i].get<std::string>() == e.counted.coeffs()[i].get_str());
  };
  for (const auto& row : a.d2)
    for (const auto& e : row) check_entry(e);
  for (const auto& row : a.d1)
    for (const auto& e : row) check_entry(e);
}

TEST_CASE("counts are invariant under a small off-support perturbation") {
  NovikovAssembly base = assemble_novikov(shooter(), 96);
  TorusShooter pert(kSys, points(), 9, 1e-3);
  pert.set_perturbation(offset_bump(points(), 1e-3));
  NovikovAssembly moved = assemble_novikov(pert, 96);
  RecountComparison cmp = compare_counts(base, moved, 5);
  CHECK(cmp.identical);

  // a coarse perturbation exercises the difference report path; counts may
  // or may not move, but the comparison must complete
  TorusShooter rough(kSys, points(), 9, 1e-3);
  rough.set_perturbation(offset_bump(points(), 0.3));
  RecountComparison probe = compare_counts(base, assemble_novikov(rough, 96), 5);
  CHECK(probe.order_compared == 5);
}

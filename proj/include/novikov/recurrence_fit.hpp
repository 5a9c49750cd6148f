#ifndef NOVIKOV_RECURRENCE_FIT_HPP
#define NOVIKOV_RECURRENCE_FIT_HPP

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "novikov/errors.hpp"
#include "novikov/int_poly.hpp"
#include "novikov/laurent_series.hpp"
#include "novikov/novikov_rational.hpp"

namespace novikov {

namespace detail {

/// Minimal linear recurrence of the sequence u over Q (Berlekamp-Massey with
/// exact rational arithmetic).  Returns the connection polynomial
/// C(t) = 1 + c_1 t + ... with sum_{i=0}^{deg C} c_i u_{k-i} = 0 for
/// length <= k < |u|, and the minimal LFSR length (deg C <= length).
struct Lfsr {
  std::vector<Rat> c;
  std::size_t length = 0;
};

inline Lfsr berlekamp_massey(const std::vector<Rat>& u) {
  std::vector<Rat> c{Rat(1)}, b{Rat(1)};
  std::size_t L = 0, m = 1;
  Rat bb(1);
  for (std::size_t n = 0; n < u.size(); ++n) {
    Rat delta = u[n];
    for (std::size_t i = 1; i < c.size() && i <= n; ++i) delta += c[i] * u[n - i];
    if (delta == 0) {
      ++m;
      continue;
    }
    Rat f = delta / bb;
    if (2 * L <= n) {
      std::vector<Rat> keep = c;
      if (c.size() < b.size() + m) c.resize(b.size() + m, Rat(0));
      for (std::size_t i = 0; i < b.size(); ++i) c[i + m] -= f * b[i];
      L = n + 1 - L;
      b = std::move(keep);
      bb = delta;
      m = 1;
    } else {
      if (c.size() < b.size() + m) c.resize(b.size() + m, Rat(0));
      for (std::size_t i = 0; i < b.size(); ++i) c[i + m] -= f * b[i];
      ++m;
    }
  }
  while (!c.empty() && c.back() == 0) c.pop_back();
  return {std::move(c), L};
}

/// Clear a rational P/Q to a coprime integer pair by one common scalar.
inline std::pair<IntPoly, IntPoly> clear_to_integers(const RatPoly& p, const RatPoly& q) {
  Int d = 1;
  for (const auto& v : p.coeffs()) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.get_den_mpz_t());
  for (const auto& v : q.coeffs()) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.get_den_mpz_t());
  auto scale = [&d](const RatPoly& r) {
    std::vector<Int> z;
    z.reserve(r.coeffs().size());
    for (const auto& v : r.coeffs()) {
      Rat s = v * d;
      z.push_back(s.get_num());
    }
    return IntPoly(std::move(z));
  };
  IntPoly pz = scale(p), qz = scale(q);
  Int g, cp = pz.content(), cq = qz.content();
  mpz_gcd(g.get_mpz_t(), cp.get_mpz_t(), cq.get_mpz_t());
  if (g > 1) {
    pz = IntPoly::div_exact(pz, IntPoly::constant(g));
    qz = IntPoly::div_exact(qz, IntPoly::constant(g));
  }
  return {std::move(pz), std::move(qz)};
}

}  // namespace detail

/// Inverse of expand_rational: exact reconstruction of the minimal-order
/// rational function P/(t^m Q) with deg Q <= max_deg and Q(0) = 1 whose
/// expansion matches every known term of s.  Returns nullopt when no linear
/// recurrence of order <= max_deg explains the window.
inline std::optional<NovikovRational> fit_rational(const LaurentSeries& s, std::size_t max_deg) {
  if (s.truncation() < 2 * max_deg + 2)
    throw invalid_params("fit_rational needs at least 2*max_deg + 2 known terms");
  if (s.is_zero_on_window()) return NovikovRational::zero();

  std::vector<Rat> u;
  u.reserve(s.truncation());
  for (const auto& v : s.coeffs()) u.emplace_back(v);

  detail::Lfsr lfsr = detail::berlekamp_massey(u);
  const std::size_t L = lfsr.length;

  // regular-part numerator: (C * U) truncated below t^L
  std::vector<Rat> pnum(L, Rat(0));
  for (std::size_t k = 0; k < L; ++k)
    for (std::size_t i = 0; i < lfsr.c.size() && i <= k; ++i) pnum[k] += lfsr.c[i] * u[k - i];

  RatPoly prat{std::move(pnum)}, qrat{std::move(lfsr.c)};
  RatPoly g = RatPoly::gcd(prat, qrat);
  if (g.degree() > 0) {
    prat = RatPoly::div_exact(prat, g);
    qrat = RatPoly::div_exact(qrat, g);
  }
  auto [p, q] = detail::clear_to_integers(prat, qrat);
  if (q.constant_coeff() < 0) {
    p = -p;
    q = -q;
  }
  if (q.constant_coeff() != 1) return std::nullopt;
  if (q.degree() > static_cast<int>(max_deg)) return std::nullopt;

  NovikovRational r(p.shifted(s.lead() >= 0 ? static_cast<std::size_t>(s.lead()) : 0),
                    s.lead() < 0 ? -s.lead() : 0, q);

  // guard: the fit must reproduce every known term of the window
  long want_limit = s.order_limit();
  long start = -static_cast<long>(r.shift());
  std::size_t need = static_cast<std::size_t>(std::max<long>(0, want_limit - start));
  LaurentSeries back = expand_rational(r, need);
  for (long k = std::min<long>(start, s.lead()); k < want_limit; ++k)
    if (!back.knows(k) || back.coeff(k) != s.coeff(k)) return std::nullopt;
  return r;
}

}  // namespace novikov

#endif

#ifndef NOVIKOV_NOVIKOV_RATIONAL_HPP
#define NOVIKOV_NOVIKOV_RATIONAL_HPP

#include <cassert>
#include <string>
#include <utility>

#include "novikov/errors.hpp"
#include "novikov/int_poly.hpp"
#include "novikov/laurent_series.hpp"

namespace novikov {

/// Rational function of the shape P(t) / (t^m Q(t)) with integer P, Q and
/// Q(0) = 1.  Canonical form: gcd(P, Q) = 1 and m minimal (t does not divide
/// P while m > 0).
class NovikovRational {
 public:
  NovikovRational() : q_(IntPoly::constant(1)) {}  // zero

  NovikovRational(IntPoly p, long shift, IntPoly q) { normalize(std::move(p), shift, std::move(q)); }

  static NovikovRational zero() { return NovikovRational(); }

  const IntPoly& numerator() const { return p_; }
  const IntPoly& denominator() const { return q_; }
  std::size_t shift() const { return m_; }
  bool is_zero() const { return p_.is_zero(); }

  friend bool operator==(const NovikovRational& a, const NovikovRational& b) {
    return a.m_ == b.m_ && a.p_ == b.p_ && a.q_ == b.q_;
  }

  std::string to_string() const {
    std::string s = "(" + p_.to_string() + ")";
    if (m_ > 0 || q_.degree() > 0) {
      s += " / (";
      if (m_ == 1) s += "t";
      if (m_ > 1) s += "t^" + std::to_string(m_);
      if (m_ > 0 && q_.degree() > 0) s += " ";
      if (q_.degree() > 0) s += "(" + q_.to_string() + ")";
      if (m_ > 0 && q_.degree() == 0) s += "";
      s += ")";
    }
    return s;
  }

 private:
  void normalize(IntPoly p, long shift, IntPoly q) {
    if (q.is_zero() || q.constant_coeff() == 0)
      throw invalid_params("denominator must have nonzero constant coefficient");
    if (p.is_zero()) {
      p_ = IntPoly();
      q_ = IntPoly::constant(1);
      m_ = 0;
      return;
    }
    // common polynomial factor over Q, cleared to a primitive integer one
    IntPoly g = poly_gcd_rational(p, q);
    if (g.degree() > 0) {
      p = IntPoly::div_exact(p, g);
      q = IntPoly::div_exact(q, g);
    }
    // common integer content
    Int cp = p.content(), cq = q.content(), c;
    mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), cp.get_mpz_t());
    mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), cq.get_mpz_t());
    if (c > 1) {
      p = IntPoly::div_exact(p, IntPoly::constant(c));
      q = IntPoly::div_exact(q, IntPoly::constant(c));
    }
    if (q.constant_coeff() < 0) {
      p = -p;
      q = -q;
    }
    if (q.constant_coeff() != 1)
      throw invalid_params("no representation with Q(0) = 1: constant term " +
                           q.constant_coeff().get_str());
    // minimal shift: fold powers of t between numerator and t^m
    std::size_t val = p.t_valuation();
    if (shift > 0 && val > 0) {
      std::size_t k = std::min<std::size_t>(val, static_cast<std::size_t>(shift));
      p = p.t_shift_down(k);
      shift -= static_cast<long>(k);
    }
    if (shift < 0) {
      p = p.shifted(static_cast<std::size_t>(-shift));
      shift = 0;
    }
    p_ = std::move(p);
    q_ = std::move(q);
    m_ = static_cast<std::size_t>(shift);
  }

  IntPoly p_;
  IntPoly q_;
  std::size_t m_ = 0;
};

/// Power-series expansion of r to `terms` known coefficients.  The window
/// starts at t^-m; coefficients a_k satisfy the exact linear recurrence
/// sum_j q_j a_{k-j} = p_k.
inline LaurentSeries expand_rational(const NovikovRational& r, std::size_t terms) {
  const IntPoly& p = r.numerator();
  const IntPoly& q = r.denominator();
  std::vector<Int> a(terms, Int(0));
  for (std::size_t k = 0; k < terms; ++k) {
    Int v = p.coeff(k);
    std::size_t jmax = std::min<std::size_t>(k, static_cast<std::size_t>(q.degree()));
    for (std::size_t j = 1; j <= jmax; ++j) v -= q.coeff(j) * a[k - j];
    a[k] = std::move(v);  // q_0 = 1
  }
  return LaurentSeries(-static_cast<long>(r.shift()), std::move(a));
}

}  // namespace novikov

#endif

#ifndef NOVIKOV_INT_POLY_HPP
#define NOVIKOV_INT_POLY_HPP

#include <gmpxx.h>

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace novikov {

using Int = mpz_class;
using Rat = mpq_class;

/// Dense polynomial with arbitrary-precision integer coefficients,
/// coefficient of t^i at index i.  Canonical form: empty vector for the
/// zero polynomial, otherwise a nonzero leading coefficient.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<Int> c) : c_(std::move(c)) { trim(); }
  IntPoly(std::initializer_list<long> c) {
    for (long v : c) c_.emplace_back(v);
    trim();
  }
  static IntPoly constant(Int v) {
    IntPoly p;
    if (v != 0) p.c_.push_back(std::move(v));
    return p;
  }
  static IntPoly monomial(Int v, std::size_t k) {
    IntPoly p;
    if (v != 0) {
      p.c_.assign(k + 1, Int(0));
      p.c_[k] = std::move(v);
    }
    return p;
  }

  bool is_zero() const { return c_.empty(); }
  // degree of the zero polynomial is -1
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Int>& coeffs() const { return c_; }
  Int coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Int(0); }
  Int constant_coeff() const { return coeff(0); }
  Int leading_coeff() const { return c_.empty() ? Int(0) : c_.back(); }

  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

  friend IntPoly operator-(const IntPoly& a) {
    IntPoly r = a;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    IntPoly r;
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), Int(0));
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.coeff(i) + b.coeff(i);
    r.trim();
    return r;
  }
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    IntPoly r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    r.trim();
    return r;
  }
  friend IntPoly operator*(const IntPoly& a, const Int& s) {
    if (s == 0) return {};
    IntPoly r = a;
    for (auto& v : r.c_) v *= s;
    return r;
  }

  /// p * t^k
  IntPoly shifted(std::size_t k) const {
    if (is_zero() || k == 0) return *this;
    IntPoly r;
    r.c_.assign(k, Int(0));
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    return r;
  }

  /// Largest k with t^k | p (0 for the zero polynomial).
  std::size_t t_valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != 0) return i;
    return 0;
  }

  /// p / t^k, requires t^k | p.
  IntPoly t_shift_down(std::size_t k) const {
    if (is_zero()) return {};
    assert(k <= t_valuation());
    return IntPoly(std::vector<Int>(c_.begin() + static_cast<long>(k), c_.end()));
  }

  Int eval(const Int& x) const {
    Int r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }
  double eval(double x) const {
    double r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + it->get_d();
    return r;
  }

  /// gcd of |coefficients|, 0 for the zero polynomial.
  Int content() const {
    Int g = 0;
    for (const auto& v : c_) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
      if (g == 1) break;
    }
    return g;
  }

  Int abs_coeff_sum() const {
    Int s = 0;
    for (const auto& v : c_) s += abs(v);
    return s;
  }

  /// Exact division, aborts if the divisor does not divide evenly.
  static IntPoly div_exact(const IntPoly& num, const IntPoly& den) {
    assert(!den.is_zero());
    if (num.is_zero()) return {};
    assert(num.degree() >= den.degree());
    std::vector<Int> rem = num.c_;
    std::vector<Int> quo(num.c_.size() - den.c_.size() + 1, Int(0));
    const Int& lead = den.c_.back();
    for (int i = static_cast<int>(quo.size()) - 1; i >= 0; --i) {
      Int q, r;
      mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(),
                  rem[i + den.c_.size() - 1].get_mpz_t(), lead.get_mpz_t());
      assert(r == 0 && "polynomial division is not exact");
      quo[i] = q;
      if (q != 0)
        for (std::size_t j = 0; j < den.c_.size(); ++j) rem[i + j] -= q * den.c_[j];
    }
    for (const auto& v : rem) {
      (void)v;
      assert(v == 0 && "polynomial division is not exact");
    }
    return IntPoly(std::move(quo));
  }

  std::string to_string(const char* var = "t") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      Int a = c_[i];
      if (first) {
        if (a < 0) os << "-";
      } else {
        os << (a < 0 ? " - " : " + ");
      }
      Int m = abs(a);
      if (i == 0 || m != 1) os << m.get_str();
      if (i > 0) {
        os << var;
        if (i > 1) os << "^" << i;
      }
      first = false;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Int> c_;
};

/// Polynomials with rational coefficients; only what gcd reduction needs.
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rat> c) : c_(std::move(c)) { trim(); }
  static RatPoly from_int(const IntPoly& p) {
    std::vector<Rat> c;
    c.reserve(p.coeffs().size());
    for (const auto& v : p.coeffs()) c.emplace_back(v);
    return RatPoly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rat>& coeffs() const { return c_; }

  /// Remainder of a by b (b nonzero), standard long division over Q.
  static RatPoly rem(RatPoly a, const RatPoly& b) {
    assert(!b.is_zero());
    const Rat& lead = b.c_.back();
    while (!a.is_zero() && a.degree() >= b.degree()) {
      Rat q = a.c_.back() / lead;
      std::size_t off = a.c_.size() - b.c_.size();
      for (std::size_t j = 0; j < b.c_.size(); ++j) a.c_[off + j] -= q * b.c_[j];
      a.trim();
    }
    return a;
  }

  /// Exact quotient over Q[t]; b must divide a.
  static RatPoly div_exact(RatPoly a, const RatPoly& b) {
    assert(!b.is_zero());
    if (a.is_zero()) return {};
    const Rat& lead = b.c_.back();
    std::vector<Rat> quo(a.c_.size() - b.c_.size() + 1, Rat(0));
    while (!a.is_zero() && a.degree() >= b.degree()) {
      Rat q = a.c_.back() / lead;
      std::size_t off = a.c_.size() - b.c_.size();
      quo[off] = q;
      for (std::size_t j = 0; j < b.c_.size(); ++j) a.c_[off + j] -= q * b.c_[j];
      a.trim();
    }
    assert(a.is_zero() && "rational polynomial division is not exact");
    return RatPoly(std::move(quo));
  }

  /// Monic gcd over Q[t]; gcd(0,0) = 0.
  static RatPoly gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
      RatPoly r = rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    if (!a.is_zero()) {
      Rat lead = a.c_.back();
      for (auto& v : a.c_) v /= lead;
    }
    return a;
  }

  /// Smallest positive integer d with d*p integral, then primitive part:
  /// the unique primitive integer polynomial that is a positive multiple of p.
  IntPoly primitive_integer() const {
    if (is_zero()) return {};
    Int d = 1;
    for (const auto& v : c_) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.get_den_mpz_t());
    std::vector<Int> z;
    z.reserve(c_.size());
    for (const auto& v : c_) {
      Rat s = v * d;
      assert(s.get_den() == 1);
      z.push_back(s.get_num());
    }
    IntPoly p(std::move(z));
    Int g = p.content();
    if (g > 1) p = IntPoly::div_exact(p, IntPoly::constant(g));
    if (p.leading_coeff() < 0) p = -p;
    return p;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rat> c_;
};

/// Primitive integer gcd of a and b as elements of Q[t] (unit-normalized with
/// positive leading coefficient).  Content is handled separately by callers.
inline IntPoly poly_gcd_rational(const IntPoly& a, const IntPoly& b) {
  return RatPoly::gcd(RatPoly::from_int(a), RatPoly::from_int(b)).primitive_integer();
}

}  // namespace novikov

#endif

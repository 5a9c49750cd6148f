#ifndef NOVIKOV_LAURENT_SERIES_HPP
#define NOVIKOV_LAURENT_SERIES_HPP

#include <algorithm>
#include <cassert>
#include <sstream>
#include <string>
#include <vector>

#include "novikov/errors.hpp"
#include "novikov/int_poly.hpp"

namespace novikov {

/// Truncated integer Laurent series: an element of Z[[t]][t^-1] known up to
/// a finite order.  Coefficients below `lead` are zero, the window
/// [lead, lead+K) is stored, everything from lead+K on is unknown.
/// Canonical form keeps a nonzero first stored coefficient (leading zeros are
/// converted into known-zero positions below the window).
class LaurentSeries {
 public:
  LaurentSeries() = default;
  LaurentSeries(long lead, std::vector<Int> coeffs) : lead_(lead), a_(std::move(coeffs)) {
    canonicalize();
  }

  /// Polynomial embedded with `terms` known coefficients starting at t^0.
  static LaurentSeries from_poly(const IntPoly& p, std::size_t terms) {
    std::vector<Int> c(terms, Int(0));
    for (std::size_t i = 0; i < terms && i < p.coeffs().size(); ++i) c[i] = p.coeffs()[i];
    return LaurentSeries(0, std::move(c));
  }

  static LaurentSeries monomial(const Int& v, long k) { return LaurentSeries(k, {v}); }

  long lead() const { return lead_; }
  std::size_t truncation() const { return a_.size(); }
  /// First unknown exponent.
  long order_limit() const { return lead_ + static_cast<long>(a_.size()); }
  const std::vector<Int>& coeffs() const { return a_; }
  bool known_zero() const { return a_.empty() ? true : false; }

  bool knows(long k) const { return k < order_limit(); }
  /// Coefficient of t^k; requires knows(k).
  Int coeff(long k) const {
    assert(knows(k));
    if (k < lead_) return Int(0);
    return a_[static_cast<std::size_t>(k - lead_)];
  }

  bool is_zero_on_window() const {
    for (const auto& v : a_)
      if (v != 0) return false;
    return true;
  }

  friend bool operator==(const LaurentSeries& x, const LaurentSeries& y) {
    return x.lead_ == y.lead_ && x.a_ == y.a_;
  }

  friend LaurentSeries operator-(const LaurentSeries& x) {
    LaurentSeries r = x;
    for (auto& v : r.a_) v = -v;
    return r;
  }

  /// Sum, known on the intersection of the knowledge windows.
  friend LaurentSeries operator+(const LaurentSeries& x, const LaurentSeries& y) {
    long limit = std::min(x.order_limit(), y.order_limit());
    long lead = std::min(x.lead_, y.lead_);
    if (limit <= lead) return LaurentSeries(limit, {});
    std::vector<Int> c;
    c.reserve(static_cast<std::size_t>(limit - lead));
    for (long k = lead; k < limit; ++k) {
      Int v = 0;
      if (k >= x.lead_ && x.knows(k)) v += x.coeff(k);
      if (k >= y.lead_ && y.knows(k)) v += y.coeff(k);
      c.push_back(std::move(v));
    }
    return LaurentSeries(lead, std::move(c));
  }
  friend LaurentSeries operator-(const LaurentSeries& x, const LaurentSeries& y) {
    return x + (-y);
  }

  std::string to_string(const char* var = "t") const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (a_[i] == 0) continue;
      long k = lead_ + static_cast<long>(i);
      if (first) {
        if (a_[i] < 0) os << "-";
      } else {
        os << (a_[i] < 0 ? " - " : " + ");
      }
      Int m = abs(a_[i]);
      if (k == 0 || m != 1) os << m.get_str();
      if (k != 0) {
        os << var;
        if (k != 1) os << "^" << k;
      }
      first = false;
    }
    if (first) os << "0";
    os << " + O(" << var << "^" << order_limit() << ")";
    return os.str();
  }

 private:
  void canonicalize() {
    std::size_t drop = 0;
    while (drop < a_.size() && a_[drop] == 0) ++drop;
    if (drop > 0) {
      lead_ += static_cast<long>(drop);
      a_.erase(a_.begin(), a_.begin() + static_cast<long>(drop));
    }
  }

  long lead_ = 0;
  std::vector<Int> a_;
};

/// Exact convolution; leads add, the knowledge window is the narrowest one the
/// factors support (truncation count = min of the two).
inline LaurentSeries series_mul(const LaurentSeries& x, const LaurentSeries& y) {
  long lead = x.lead() + y.lead();
  std::size_t terms = std::min(x.truncation(), y.truncation());
  std::vector<Int> c(terms, Int(0));
  for (std::size_t i = 0; i < x.truncation(); ++i)
    for (std::size_t j = 0; j < y.truncation(); ++j)
      if (i + j < terms) c[i + j] += x.coeffs()[i] * y.coeffs()[j];
  return LaurentSeries(lead, std::move(c));
}

/// Multiplicative inverse in Z[[t]][t^-1], defined when the lowest nonzero
/// coefficient is a unit.  Produces min(terms, truncation of a) coefficients.
inline LaurentSeries series_inverse(const LaurentSeries& a, std::size_t terms) {
  if (a.truncation() == 0 || a.coeffs()[0] == 0)
    throw not_invertible("series has no known nonzero lowest coefficient");
  const Int& u = a.coeffs()[0];
  if (u != 1 && u != -1)
    throw not_invertible("lowest coefficient " + Int(u).get_str() + " is not a unit in Z");
  std::size_t n = std::min(terms, a.truncation());
  std::vector<Int> b(n, Int(0));
  if (n == 0) return LaurentSeries(-a.lead(), {});
  b[0] = u;  // 1/u = u for u = +-1
  for (std::size_t k = 1; k < n; ++k) {
    Int s = 0;
    for (std::size_t j = 1; j <= k; ++j) s += a.coeffs()[j] * b[k - j];
    b[k] = -u * s;
  }
  return LaurentSeries(-a.lead(), std::move(b));
}

}  // namespace novikov

#endif

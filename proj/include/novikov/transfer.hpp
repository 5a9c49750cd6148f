#ifndef NOVIKOV_TRANSFER_HPP
#define NOVIKOV_TRANSFER_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "novikov/errors.hpp"
#include "novikov/int_poly.hpp"
#include "novikov/laurent_series.hpp"
#include "novikov/novikov_rational.hpp"
#include "novikov/poly_matrix.hpp"

namespace novikov {

/// Endomorphism of Z^r as an exact integer matrix (row-major).
class Endomorphism {
 public:
  Endomorphism(std::size_t r, std::vector<Int> entries) : r_(r), a_(std::move(entries)) {
    if (a_.size() != r_ * r_) throw dimension_mismatch("matrix is not square of rank r");
  }
  static Endomorphism zero(std::size_t r) { return Endomorphism(r, std::vector<Int>(r * r, Int(0))); }

  std::size_t rank() const { return r_; }
  const Int& at(std::size_t i, std::size_t j) const { return a_[i * r_ + j]; }
  Int& at(std::size_t i, std::size_t j) { return a_[i * r_ + j]; }

  std::vector<Int> apply(const std::vector<Int>& v) const {
    std::vector<Int> w(r_, Int(0));
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < r_; ++j) w[i] += a_[i * r_ + j] * v[j];
    return w;
  }

 private:
  std::size_t r_;
  std::vector<Int> a_;
};

/// Transfer data: endomorphism h on Z^r, a class vector p, a functional
/// lambda, and the lift shift m.
struct MonodromyData {
  Endomorphism h;
  std::vector<Int> lambda;  // row vector
  std::vector<Int> p;       // column vector
  long shift = 0;
};

/// The generating series sum_k lambda(A^k p) t^k as an exact rational
/// function P(t)/Q(t) with Q(t) = det(I - A t), hence Q(0) = 1.  P is
/// lambda * adj(I - A t) * p, computed from one fraction-free elimination.
inline NovikovRational generating_series(const Endomorphism& a, const std::vector<Int>& lambda,
                                         const std::vector<Int>& p) {
  const std::size_t r = a.rank();
  if (lambda.size() != r || p.size() != r)
    throw dimension_mismatch("class vectors do not match the endomorphism rank");
  if (r == 0) return NovikovRational::zero();

  PolyMatrix m(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      std::vector<Int> c{Int(i == j ? 1 : 0), -a.at(i, j)};
      m.at(i, j) = IntPoly(std::move(c));
    }
  std::vector<IntPoly> rhs(r);
  for (std::size_t i = 0; i < r; ++i) rhs[i] = IntPoly::constant(p[i]);

  PolySolve sol = bareiss_solve_adjugate(std::move(m), std::move(rhs));
  IntPoly num;
  for (std::size_t i = 0; i < r; ++i) num = num + sol.x[i] * lambda[i];
  return NovikovRational(std::move(num), 0, std::move(sol.det));
}

/// Direct evaluation oracle: coefficient k is lambda . (A^k p) by repeated
/// exact matrix-vector products.
inline LaurentSeries brute_force_series(const Endomorphism& a, const std::vector<Int>& lambda,
                                        const std::vector<Int>& p, std::size_t terms) {
  const std::size_t r = a.rank();
  if (lambda.size() != r || p.size() != r)
    throw dimension_mismatch("class vectors do not match the endomorphism rank");
  std::vector<Int> w = p;
  std::vector<Int> c(terms, Int(0));
  for (std::size_t k = 0; k < terms; ++k) {
    Int s = 0;
    for (std::size_t i = 0; i < r; ++i) s += lambda[i] * w[i];
    c[k] = std::move(s);
    if (k + 1 < terms) w = a.apply(w);
  }
  return LaurentSeries(0, std::move(c));
}

/// Incidence series of the transfer data: t^-m * generating_series, i.e. the
/// rational function P/(t^m Q).  For m = 0 every negative-power coefficient
/// vanishes.
inline NovikovRational incidence_series(const MonodromyData& d) {
  NovikovRational base = generating_series(d.h, d.lambda, d.p);
  return NovikovRational(base.numerator(), d.shift + static_cast<long>(base.shift()),
                         base.denominator());
}

}  // namespace novikov

#endif

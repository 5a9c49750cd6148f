#ifndef NOVIKOV_POLY_MATRIX_HPP
#define NOVIKOV_POLY_MATRIX_HPP

#include <cassert>
#include <utility>
#include <vector>

#include "novikov/int_poly.hpp"

namespace novikov {

/// Dense square matrix over Z[t].
class PolyMatrix {
 public:
  explicit PolyMatrix(std::size_t n) : n_(n), a_(n * n) {}

  std::size_t size() const { return n_; }
  IntPoly& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const IntPoly& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<IntPoly> a_;
};

/// det(M) and x = adj(M) * rhs computed together by fraction-free Bareiss
/// elimination with row pivoting and exact back substitution.  x solves
/// M x = det(M) * rhs over Z[t].  Requires det(M) != 0.
struct PolySolve {
  IntPoly det;
  std::vector<IntPoly> x;
};

inline IntPoly bareiss_det(PolyMatrix m) {
  const std::size_t n = m.size();
  if (n == 0) return IntPoly::constant(1);
  int sign = 1;
  IntPoly prev = IntPoly::constant(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m.at(piv, k).is_zero()) ++piv;
    if (piv == n) return {};  // singular
    if (piv != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(m.at(piv, j), m.at(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        m.at(i, j) =
            IntPoly::div_exact(m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j), prev);
      m.at(i, k) = IntPoly();
    }
    prev = m.at(k, k);
  }
  IntPoly d = m.at(n - 1, n - 1);
  return sign < 0 ? -d : d;
}

inline PolySolve bareiss_solve_adjugate(PolyMatrix m, std::vector<IntPoly> b) {
  const std::size_t n = m.size();
  assert(b.size() == n);
  if (n == 0) return {IntPoly::constant(1), {}};
  int sign = 1;
  IntPoly prev = IntPoly::constant(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m.at(piv, k).is_zero()) ++piv;
    assert(piv < n && "matrix is singular");
    if (piv != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(m.at(piv, j), m.at(k, j));
      std::swap(b[piv], b[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      b[i] = IntPoly::div_exact(b[i] * m.at(k, k) - m.at(i, k) * b[k], prev);
      for (std::size_t j = k + 1; j < n; ++j)
        m.at(i, j) =
            IntPoly::div_exact(m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j), prev);
      m.at(i, k) = IntPoly();
    }
    prev = m.at(k, k);
  }
  IntPoly det = m.at(n - 1, n - 1);
  if (sign < 0) det = -det;

  // back substitution for x with M x = det * rhs; divisions are exact
  std::vector<IntPoly> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    IntPoly num = det * b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) num = num - m.at(ii, j) * x[j];
    x[ii] = IntPoly::div_exact(num, m.at(ii, ii));
  }
  return {std::move(det), std::move(x)};
}

}  // namespace novikov

#endif

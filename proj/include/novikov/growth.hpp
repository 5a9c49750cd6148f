#ifndef NOVIKOV_GROWTH_HPP
#define NOVIKOV_GROWTH_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <limits>

#include "novikov/novikov_rational.hpp"

namespace novikov {

namespace detail {

inline std::complex<double> poly_eval(const IntPoly& q, std::complex<double> z) {
  std::complex<double> r = 0;
  for (auto it = q.coeffs().rbegin(); it != q.coeffs().rend(); ++it) r = r * z + it->get_d();
  return r;
}

inline std::complex<double> poly_deriv_eval(const IntPoly& q, std::complex<double> z) {
  std::complex<double> r = 0;
  int d = q.degree();
  for (int i = d; i >= 1; --i) r = r * z + double(i) * q.coeff(static_cast<std::size_t>(i)).get_d();
  return r;
}

}  // namespace detail

/// Exponential growth rate sigma = 1 / (minimum modulus of the roots of Q).
/// The expanded coefficients satisfy |a_k| <= C (sigma + eps)^k for every
/// eps > 0.  Returns 0 for constant Q (finite series).  Roots come from the
/// companion-matrix eigenvalues, polished by Newton steps to ~1e-9 residual.
inline double growth_estimate(const NovikovRational& r) {
  const IntPoly& q = r.denominator();
  int d = q.degree();
  if (d <= 0) return 0.0;

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  double lead = q.coeff(static_cast<std::size_t>(d)).get_d();
  for (int i = 0; i < d - 1; ++i) comp(i + 1, i) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -q.coeff(static_cast<std::size_t>(i)).get_d() / lead;

  Eigen::VectorXcd eig = comp.eigenvalues();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i) {
    std::complex<double> z = eig(i);
    for (int it = 0; it < 40; ++it) {
      std::complex<double> f = detail::poly_eval(q, z);
      if (std::abs(f) < 1e-9) break;
      std::complex<double> df = detail::poly_deriv_eval(q, z);
      if (std::abs(df) == 0.0) break;
      z -= f / df;
    }
    best = std::min(best, std::abs(z));
  }
  return 1.0 / best;
}

}  // namespace novikov

#endif

#pragma once

// Independent reference computations used only by the tests. None of these
// call into the closed formulas they are meant to check.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/laguerre.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <vector>

#include "magflow/block_operator.hpp"
#include "magflow/landau.hpp"

namespace oracle {

using magflow::cplx;
using magflow::Mat;

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Normalized radial part of psi_{n,l} times sqrt(2 pi), straight from the
// eigenfunction definition. Negative l goes through the polynomial identity
// L_n^l(x) = ((n+l)!/n!) (-x)^{-l} L_{n+l}^{-l}(x) so that the r^l pole
// cancels analytically.
inline double radial(int n, int l, double r) {
  const double x = 0.5 * r * r;
  const double damp = std::exp(-0.25 * r * r);
  const double sgn_n = (n % 2 == 0) ? 1.0 : -1.0;
  if (l >= 0) {
    const double norm = std::sqrt(factorial(n) / (std::pow(2.0, l) * factorial(n + l)));
    return sgn_n * norm * std::pow(r, l) * boost::math::laguerre(n, l, x) * damp;
  }
  const int p = -l;
  const int np = n - p;
  const double sgn_p = (p % 2 == 0) ? 1.0 : -1.0;
  // sqrt(n! 2^p / np!) r^-p (np!/n!) (-1)^p (r^2/2)^p L_np^p
  const double coef = std::sqrt(factorial(np) / (factorial(n) * std::pow(2.0, p)));
  return sgn_n * sgn_p * coef * std::pow(r, p) * boost::math::laguerre(np, p, x) * damp;
}

/// <psi_{n,l}, g psi_{m,l}> by adaptive Gauss-Kronrod on [0, 20]; the
/// integrand there is below 1e-40 at the upper end for n, m <= 20, |l| <= 10.
inline double radial_element(int n, int m, int l, double* error_estimate = nullptr) {
  auto f = [&](double r) { return radial(n, l, r) * radial(m, l, r) * std::exp(-0.5 * r * r) * r; };
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 20.0, 15, 1e-13, &err);
  if (error_estimate) *error_estimate = err;
  return v;
}

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

inline cpp_int exact_factorial(int n) {
  cpp_int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Square of the closed-form element magnitude in exact rational arithmetic:
/// ((l+m+n)!)^2 / (4^{l+m+n+1} (l+m)! (l+n)! n! m!).
inline cpp_rational exact_element_squared(int n, int m, int l) {
  const cpp_int top = exact_factorial(l + m + n);
  const cpp_int bottom = (cpp_int(1) << (2 * (l + m + n + 1))) * exact_factorial(l + m) *
                         exact_factorial(l + n) * exact_factorial(n) * exact_factorial(m);
  return cpp_rational(top * top, bottom);
}

/// (l+m+n)! / (2^{m+n} l! m! n!) exactly.
inline cpp_rational exact_b0(int n, int m, int l) {
  return cpp_rational(exact_factorial(l + m + n),
                      (cpp_int(1) << (m + n)) * exact_factorial(l) * exact_factorial(m) *
                          exact_factorial(n));
}

/// Pade scaling-and-squaring exponential.
inline Mat expm(const Mat& a) { return a.exp(); }

/// Solves A X - X B = C through the Kronecker form (I (x) A - B^T (x) I) vec X = vec C.
inline Mat sylvester_dense(const Mat& a, const Mat& b, const Mat& c) {
  const Eigen::Index p = a.rows();
  const Eigen::Index q = b.rows();
  Mat k = Mat::Zero(p * q, p * q);
  for (Eigen::Index j = 0; j < q; ++j) {
    k.block(j * p, j * p, p, p) += a;
    for (Eigen::Index jj = 0; jj < q; ++jj) {
      k.block(jj * p, j * p, p, p) -= b(j, jj) * Mat::Identity(p, p);
    }
  }
  Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(c.data(), p * q);
  Eigen::VectorXcd x = k.fullPivLu().solve(rhs);
  return Eigen::Map<Mat>(x.data(), p, q);
}

/// <psi_a, exp(-|q - y|^2 / 2) psi_b> by a polar product rule: trapezoid in
/// theta (the integrand is periodic and entire) and unit-panel Gauss-Kronrod
/// in r.
/// Uses psi_eval only for the eigenfunctions themselves.
inline cplx translated_element(magflow::LandauIndex a, magflow::LandauIndex b, double y1,
                               double y2, int theta_points = 160) {
  constexpr double kPi = 3.14159265358979323846;
  auto inner = [&](double r) {
    if (r == 0.0) return cplx(0.0, 0.0);
    const double ra = std::real(magflow::psi_eval(a, r, 0.0));
    const double rb = std::real(magflow::psi_eval(b, r, 0.0));
    cplx acc = 0.0;
    for (int t = 0; t < theta_points; ++t) {
      const double th = 2.0 * kPi * t / theta_points;
      const double d1 = r * std::cos(th) - y1;
      const double d2 = r * std::sin(th) - y2;
      acc += std::polar(std::exp(-0.5 * (d1 * d1 + d2 * d2)), (b.l - a.l) * th);
    }
    return acc * (2.0 * kPi / theta_points) * ra * rb * r;
  };
  // Fixed unit panels: adaptive refinement stalls on integrals that vanish.
  using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
  cplx total = 0.0;
  for (int p = 0; p < 18; ++p) total += gk::integrate(inner, p, p + 1.0, 0);
  return total;
}

/// Sorted eigenvalues of a Hermitian matrix.
inline Eigen::VectorXd eigvalsh(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace oracle

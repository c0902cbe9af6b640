#pragma once

#include <complex>
#include <vector>

#include "magflow/block_operator.hpp"

namespace magflow {

/// Angular-momentum eigenfunction label psi_{n,l}: Landau level n, angular
/// momentum l >= -n. The center-oscillator number is k = n + l >= 0.
struct LandauIndex {
  int n = 0;
  int l = 0;

  int k() const { return n + l; }
  static LandauIndex from_level_center(int n, int k) { return {n, k - n}; }
};

/// Finite (n, k) basis: levels 0..n_landau-1, center states 0..n_center-1.
/// The interior window drops `interior_margin` indices at the upper end of
/// each range; n = 0 and k = 0 are not truncation edges.
struct Truncation {
  int n_landau = 12;
  int n_center = 24;
  int interior_margin = 4;

  void validate() const;  // throws DomainError
  int dim() const { return n_landau * n_center; }
  int interior_levels() const { return n_landau - interior_margin; }
  int interior_centers() const { return n_center - interior_margin; }
  bool in_interior(int n, int k) const { return n < interior_levels() && k < interior_centers(); }
  // Flattened index n * n_center + k.
  int flat(int n, int k) const { return n * n_center + k; }
  std::vector<int> interior_indices() const;
};

/// psi_{n,l}(r, theta) = (-1)^n sqrt(n!/(2^l (n+l)!)) r^l e^{i theta l}
///                        L_n^l(r^2/2) e^{-r^2/4} / sqrt(2 pi).
std::complex<double> psi_eval(LandauIndex idx, double r, double theta);

/// log of (l+m+n)! / (2^{l+m+n+1} sqrt((l+m)!(l+n)! n! m!)).
double log_gaussian_element_magnitude(int n, int m, int l);

/// Signed <psi_{n,l}, g psi_{m,l}> for g(q) = exp(-q^2/2):
/// (-1)^{n+m} (l+m+n)! / (2^{l+m+n+1} sqrt((l+m)!(l+n)! n! m!)).
/// Requires l >= -min(n, m).
double gaussian_element(int n, int m, int l);

/// sup over l >= -min(n,m) of |gaussian_element(n, m, l)|.
double gaussian_block_norm(int n, int m);

/// Displacement parameter of the magnetic translation by y = (y1, y2) on the
/// center oscillator: alpha = (y1 - i y2)/sqrt(2).
std::complex<double> alpha_from_shift(double y1, double y2);

/// Rows [0, rows) x columns [0, cols) of the displacement operator D(alpha)
/// on number states, with <j|D|k> = sqrt(k!/j!) alpha^{j-k} e^{-|alpha|^2/2}
/// L_k^{j-k}(|alpha|^2) for j >= k and the adjoint relation otherwise.
Mat displacement_matrix(std::complex<double> alpha, int rows, int cols);

/// Magnetic translation restricted to the center-oscillator factor
/// (n_center x n_center truncation of D(alpha)).
Mat magnetic_translation_center(std::complex<double> alpha, int n_center);

/// Empirical constants of the factorial inequalities used for the decay of
/// P_n g P_m.
struct BoundAudit {
  int n_max = 0;
  // a_{m,n} / [ (m+n)/sqrt((m+n)^2-(m-n)^2) e^{-(m-n)/(2(m+n))} ], 1 <= m,n <= n_max
  double c6 = 0.0;
  // same with the Gaussian factor e^{-(m-n)^2/(2(m+n))}
  double c6_quadratic_exponent = 0.0;
  // <m-n> a_{m,n}, 0 <= m,n <= n_max
  double c7 = 0.0;
  // <m-n> |gaussian_element(n,m,l)|, l >= -min(m,n), l+m+n <= 3 n_max
  double c8 = 0.0;
  int c8_n = 0, c8_m = 0, c8_l = 0;
  // max over n <= n_max of binom(2n,n)/4^n
  double central_binomial_max = 0.0;
  bool finite() const;
};

BoundAudit audit_bounds(int n_max);

/// a_{m,n} = (m+n)!/(2^{m+n} n! m!)
double central_ratio(int m, int n);

/// B_0^{n,m,l} = (l+m+n)!/(2^{m+n} l! m! n!)
double b0_coefficient(int n, int m, int l);

/// Taylor coefficient of x^m y^n in
/// g_0(x,y,l) = 1/((1-x)^{l+1}(1-y)^{l+1}(1 + x/(2(1-x)) + y/(2(1-y)))^{l+1}),
/// extracted numerically by a trapezoidal Cauchy integral on |x| = |y| = radius.
double generating_coefficient(int n, int m, int l, double radius = 0.5, int points = 64);

}  // namespace magflow

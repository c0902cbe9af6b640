#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "magflow/block_operator.hpp"
#include "magflow/landau.hpp"

namespace magflow {

/// Truncated ladder representation on the (n, k) basis, flattened as
/// n * n_center + k. With a acting on n and b on k:
///   v1 = -i(a - a^dagger)/sqrt2,  v2 = -(a + a^dagger)/sqrt2,
///   c1 = (b + b^dagger)/sqrt2,    c2 = i(b - b^dagger)/sqrt2,
///   q = c + v^perp,  D = (v + c^perp)/2,  x^perp = (-x2, x1).
struct LadderRep {
  Truncation trunc;
  Mat v1, v2, c1, c2, q1, q2, d1, d2;
};

LadderRep build_ladder(const Truncation& trunc);

/// Largest |entry| of m restricted to rows and columns of the interior window.
double interior_max_abs(const Mat& m, const Truncation& trunc);

struct LinearCaseReport {
  double e1 = 0.0;
  double e2 = 0.0;
  double identity1_residual = 0.0;  // U0 (H_La + V) U0^-1 vs H_La - <E,c> - E^2/2
  double identity2_residual = 0.0;  // U0^-1 H_La U0 vs (v + E^perp)^2/2
  double blockdiag_residual = 0.0;  // inter-level part of U0 (H_La + V) U0^-1
  double invariant_residual = 0.0;  // [(v + E^perp)^2/2, H_La + V]
  double spectrum_error = 0.0;      // interior eigenvalue shift under conjugation
  bool passed(double tol) const;
};

/// V = -<E, q>, U0 = exp(i <E, v>). Requires |E| <= 1.
LinearCaseReport check_linear_case(double e1, double e2, const Truncation& trunc);

struct DotCaseReport {
  double eps = 0.0;
  int sign = 1;
  double omega = 1.0;
  double identity1_residual = 0.0;  // U (H_La + V) U^-1 vs (1+O)/2 H_La + (O-1)/2 c^2/2
  double identity2_residual = 0.0;  // U^-1 H_La U vs (D/sqrt O - sqrt O q^perp/2)^2/2
  double invariant_residual = 0.0;  // [U^-1 H_La U, H_La + V]
  double spectrum_error = 0.0;
  bool passed(double tol) const;
};

/// Omega = sqrt(1 + 4 sign eps^2); throws OmegaImaginary when 1 + 4 sign eps^2 <= 0.
double dot_omega(double eps, int sign);

/// V = sign (eps^2/2) q^2, U = exp(-i log(sqrt Omega) c.v), the dilation
/// q -> q / sqrt(Omega) written in ladder form (c.v = (q.D + D.q)/2).
DotCaseReport check_dot_case(double eps, int sign, const Truncation& trunc);

BlockOperator potential_operator_linear(double e1, double e2, const Truncation& trunc);
BlockOperator potential_operator_quadratic(double eps, int sign, const Truncation& trunc);

struct HamiltonianMatrix {
  Eigen::Matrix2d v2;  // V''
  Eigen::Matrix4d h;
  double p = 0.0;  // 1 + tr V''
  double q = 0.0;  // P^2 - 4 det V''
};

/// h = [[sigma^T/2, -I], [I/4 + V'', sigma^T/2]], sigma = [[0, 1], [-1, 0]].
HamiltonianMatrix hamiltonian_matrix(const Eigen::Matrix2d& v2);

struct EigenMatch {
  std::complex<double> formula;
  double distance = 0.0;  // to the nearest numerical eigenvalue
  bool matched = false;
};

struct HamiltonianEigenReport {
  HamiltonianMatrix matrix;
  std::array<std::complex<double>, 4> eigenvalues;  // sorted by (real, imag)
  // i sqrt(P+Q), -i sqrt(P+Q), sqrt(Q-P), -sqrt(Q-P) (complex square roots)
  std::array<EigenMatch, 4> formula;
  bool formula_matches = false;
  // Counts of purely imaginary, purely real (nonzero), zero and genuinely
  // complex eigenvalues at tolerance 1e-12.
  int imaginary = 0;
  int real = 0;
  int zero = 0;
  int complex = 0;
};

HamiltonianEigenReport hamiltonian_matrix_eigen(const Eigen::Matrix2d& v2,
                                                double match_tol = 1e-9);

}  // namespace magflow

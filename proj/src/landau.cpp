#include "magflow/landau.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "magflow/errors.hpp"
#include "magflow/special.hpp"

namespace magflow {

using special::log_factorial;

void Truncation::validate() const {
  if (n_landau < 2) throw DomainError("truncation: n_landau must be >= 2");
  if (n_center < 1) throw DomainError("truncation: n_center must be >= 1");
  if (interior_margin < 0) throw DomainError("truncation: interior_margin must be >= 0");
  if (2 * interior_margin >= std::min(n_landau, n_center)) {
    throw DomainError("truncation: interior_margin must be < min(n_landau, n_center)/2");
  }
}

std::vector<int> Truncation::interior_indices() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(interior_levels()) * interior_centers());
  for (int n = 0; n < interior_levels(); ++n) {
    for (int k = 0; k < interior_centers(); ++k) out.push_back(flat(n, k));
  }
  return out;
}

std::complex<double> psi_eval(LandauIndex idx, double r, double theta) {
  const int n = idx.n;
  const int l = idx.l;
  if (n < 0 || l < -n) throw DomainError("psi_eval: need n >= 0 and l >= -n");
  if (r < 0.0) throw DomainError("psi_eval: r must be nonnegative");
  const double x = 0.5 * r * r;
  if (r == 0.0 && l != 0) return {0.0, 0.0};
  // Paper convention for all l, including l < 0 through the extended L_n^l.
  const double log_pref = 0.5 * (log_factorial(n) - l * std::numbers::ln2 - log_factorial(n + l)) +
                          l * std::log(r == 0.0 ? 1.0 : r) - 0.5 * x;
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const double radial = sign * std::exp(log_pref) * special::laguerre(n, l, x) /
                        std::sqrt(2.0 * std::numbers::pi);
  return std::polar(1.0, theta * l) * radial;
}

double log_gaussian_element_magnitude(int n, int m, int l) {
  if (n < 0 || m < 0 || l < -std::min(n, m)) {
    throw DomainError("gaussian_element: need n, m >= 0 and l >= -min(n, m)");
  }
  const int s = l + m + n;
  const double half = 0.5 * special::compensated_sum({log_factorial(l + m), log_factorial(l + n),
                                                      log_factorial(n), log_factorial(m)});
  return special::compensated_sum({log_factorial(s), -(s + 1) * std::numbers::ln2, -half});
}

double gaussian_element(int n, int m, int l) {
  const double mag = std::exp(log_gaussian_element_magnitude(n, m, l));
  return ((n + m) % 2 == 0) ? mag : -mag;
}

double gaussian_block_norm(int n, int m) {
  if (n < 0 || m < 0) throw DomainError("gaussian_block_norm: negative level");
  // The elements of the block are the k-shifted diagonal, so the block norm
  // is the sup over l. The sequence in l is unimodal with a peak near
  // l ~ (n+m); scanning a generous range past the peak is exact.
  const int lo = -std::min(n, m);
  const int hi = 2 * (n + m) + 200;
  double best = 0.0;
  for (int l = lo; l <= hi; ++l) {
    best = std::max(best, std::exp(log_gaussian_element_magnitude(n, m, l)));
  }
  return best;
}

std::complex<double> alpha_from_shift(double y1, double y2) {
  return {y1 / std::numbers::sqrt2, -y2 / std::numbers::sqrt2};
}

namespace {

std::complex<double> int_pow(std::complex<double> z, int e) {
  std::complex<double> out = 1.0;
  while (e > 0) {
    if (e & 1) out *= z;
    z *= z;
    e >>= 1;
  }
  return out;
}

}  // namespace

Mat displacement_matrix(std::complex<double> alpha, int rows, int cols) {
  if (rows < 0 || cols < 0) throw DomainError("displacement_matrix: negative size");
  Mat d = Mat::Zero(rows, cols);
  const double r = std::abs(alpha);
  if (r == 0.0) {
    for (int i = 0; i < std::min(rows, cols); ++i) d(i, i) = 1.0;
    return d;
  }
  const double x = r * r;
  const double log_r = std::log(r);
  const std::complex<double> up = alpha / r;             // phase for j >= k
  const std::complex<double> down = -std::conj(alpha) / r;  // phase for j < k
  for (int j = 0; j < rows; ++j) {
    for (int k = 0; k < cols; ++k) {
      const int lo = std::min(j, k);
      const int hi = std::max(j, k);
      const int dj = hi - lo;
      const double lag = special::laguerre(lo, dj, x);
      if (lag == 0.0) continue;
      const double log_mag =
          0.5 * (log_factorial(lo) - log_factorial(hi)) + dj * log_r - 0.5 * x;
      const std::complex<double> phase = int_pow(j >= k ? up : down, dj);
      d(j, k) = phase * (std::exp(log_mag) * lag);
    }
  }
  return d;
}

Mat magnetic_translation_center(std::complex<double> alpha, int n_center) {
  return displacement_matrix(alpha, n_center, n_center);
}

bool BoundAudit::finite() const {
  return std::isfinite(c6) && std::isfinite(c6_quadratic_exponent) && std::isfinite(c7) &&
         std::isfinite(c8) && std::isfinite(central_binomial_max);
}

double central_ratio(int m, int n) {
  if (m < 0 || n < 0) throw DomainError("central_ratio: negative index");
  return std::exp(log_factorial(m + n) - (m + n) * std::numbers::ln2 - log_factorial(n) -
                  log_factorial(m));
}

double b0_coefficient(int n, int m, int l) {
  if (n < 0 || m < 0 || l < 0) throw DomainError("b0_coefficient: negative index");
  return std::exp(log_factorial(l + m + n) - (m + n) * std::numbers::ln2 - log_factorial(l) -
                  log_factorial(m) - log_factorial(n));
}

BoundAudit audit_bounds(int n_max) {
  if (n_max < 1 || n_max > 500) throw DomainError("audit_bounds: need 1 <= n_max <= 500");
  BoundAudit a;
  a.n_max = n_max;
  const int top = 3 * n_max;
  std::vector<double> lf(top + 2);
  for (int i = 0; i <= top + 1; ++i) lf[i] = log_factorial(i);
  const double ln2 = std::numbers::ln2;

  for (int m = 0; m <= n_max; ++m) {
    for (int n = 0; n <= n_max; ++n) {
      const double log_a = lf[m + n] - (m + n) * ln2 - lf[n] - lf[m];
      const double amn = std::exp(log_a);
      const double br = std::max(1, std::abs(m - n));
      a.c7 = std::max(a.c7, br * amn);
      if (m == n) a.central_binomial_max = std::max(a.central_binomial_max, amn);
      if (m >= 1 && n >= 1) {
        const double s = m + n;
        const double b = m - n;
        const double shape = s / std::sqrt(4.0 * m * n);
        a.c6 = std::max(a.c6, amn / (shape * std::exp(-b / (2.0 * s))));
        a.c6_quadratic_exponent =
            std::max(a.c6_quadratic_exponent, amn / (shape * std::exp(-b * b / (2.0 * s))));
      }
      // Matrix-element bound, every admissible l.
      const int l0 = -std::min(m, n);
      for (int l = l0; l + m + n <= top; ++l) {
        const double v = std::exp(lf[l + m + n] - (l + m + n + 1) * ln2 -
                                  0.5 * (lf[l + m] + lf[l + n] + lf[n] + lf[m]));
        const double w = br * v;
        if (w > a.c8) {
          a.c8 = w;
          a.c8_n = n;
          a.c8_m = m;
          a.c8_l = l;
        }
      }
    }
  }
  return a;
}

double generating_coefficient(int n, int m, int l, double radius, int points) {
  if (n < 0 || m < 0 || l < 0) throw DomainError("generating_coefficient: negative index");
  if (!(radius > 0.0 && radius < 1.0) || points < 4) {
    throw DomainError("generating_coefficient: need 0 < radius < 1 and points >= 4");
  }
  using C = std::complex<double>;
  std::vector<C> z(points);
  for (int p = 0; p < points; ++p) {
    z[p] = std::polar(radius, 2.0 * std::numbers::pi * p / points);
  }
  auto g0 = [l](C x, C y) {
    const C base = (1.0 - x) * (1.0 - y) * (1.0 + x / (2.0 * (1.0 - x)) + y / (2.0 * (1.0 - y)));
    return 1.0 / std::pow(base, l + 1);
  };
  C sum = 0.0;
  for (int p = 0; p < points; ++p) {
    const C wx = std::polar(1.0, -2.0 * std::numbers::pi * m * p / points);
    for (int q = 0; q < points; ++q) {
      const C wy = std::polar(1.0, -2.0 * std::numbers::pi * n * q / points);
      sum += g0(z[p], z[q]) * wx * wy;
    }
  }
  return sum.real() / (static_cast<double>(points) * points * std::pow(radius, m + n));
}

}  // namespace magflow

#include "magflow/special.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "magflow/errors.hpp"

namespace magflow::special {

namespace {

double laguerre_nonneg(int n, int l, double x) {
  // (k+1) L_{k+1} = (2k+1+l-x) L_k - (k+l) L_{k-1}
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + l - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + l - x) * cur - (k + l) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

constexpr int kTableSize = 4096;

const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kTableSize);
    t[0] = 0.0;
    for (int i = 1; i < kTableSize; ++i) t[i] = std::lgamma(static_cast<double>(i) + 1.0);
    return t;
  }();
  return table;
}

}  // namespace

double laguerre(int n, int l, double x) {
  if (n < 0) throw DomainError("laguerre: n must be nonnegative");
  if (l < -n) {
    throw DomainError("laguerre: l=" + std::to_string(l) + " < -n=" + std::to_string(-n));
  }
  if (l >= 0) return laguerre_nonneg(n, l, x);
  const int a = -l;
  // (n+l)!/n! = 1 / (n (n-1) ... (n-a+1))
  double ratio = 1.0;
  for (int i = 0; i < a; ++i) ratio /= static_cast<double>(n - i);
  return ratio * std::pow(-x, a) * laguerre_nonneg(n + l, a, x);
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  if (n < kTableSize) return log_factorial_table()[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double compensated_sum(std::initializer_list<double> terms) {
  double sum = 0.0;
  double c = 0.0;
  for (double t : terms) {
    const double s = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      c += (sum - s) + t;
    } else {
      c += (t - s) + sum;
    }
    sum = s;
  }
  return sum + c;
}

double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma: argument must be positive");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // B_2k / (2k) coefficients: 1/12, 1/120, 1/252, 1/240, 1/132, 691/32760, 1/12
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))));
  return acc + std::log(x) - 0.5 * inv - series;
}

}  // namespace magflow::special

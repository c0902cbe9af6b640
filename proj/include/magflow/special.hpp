#pragma once

#include <complex>
#include <initializer_list>

namespace magflow::special {

/// Generalized Laguerre polynomial L_n^l(x) for l >= -n.
///
/// For l >= 0 this is the usual sum_{j=0}^n (-x)^j/j! binom(n+l, n-j),
/// evaluated by the three-term recurrence in n. For -n <= l < 0 the
/// reflection L_n^l(x) = ((n+l)!/n!) (-x)^{|l|} L_{n+l}^{|l|}(x) is used.
/// Throws DomainError when l < -n.
double laguerre(int n, int l, double x);

/// log(n!) from a lazily built table (lgamma beyond it).
double log_factorial(int n);

/// Neumaier-compensated sum of the given terms.
double compensated_sum(std::initializer_list<double> terms);

/// Digamma psi_0(x) for x > 0: upward recurrence to x >= 10, then the
/// asymptotic Bernoulli series.
double digamma(double x);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
// zeta(2) = pi^2/6
inline constexpr double kZeta2 = 1.64493406684822643647241516664602519;

}  // namespace magflow::special

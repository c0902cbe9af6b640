#include "magflow/audit.hpp"

#include <algorithm>
#include <cmath>

#include "magflow/errors.hpp"
#include "magflow/special.hpp"

namespace magflow {

double convolution_partial_sum(int n, int m, long j_max) {
  if (n < 0 || m < 0) throw DomainError("convolution_partial_sum: negative index");
  double sum = 0.0;
  double c = 0.0;  // Kahan compensation
  for (long j = j_max; j >= 0; --j) {  // small terms first
    if (j == n || j == m) continue;
    const double a = bracket(static_cast<int>(j - n));
    const double b = bracket(static_cast<int>(j - m));
    const double y = 1.0 / (a * a * b) - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double convolution_tail_bound(int n, int m, long j_max) {
  const long top = std::max(n, m);
  if (j_max <= top) throw DomainError("convolution_tail_bound: j_max must exceed max(n, m)");
  const double d = static_cast<double>(j_max - top);
  return 1.0 / (2.0 * d * d);
}

ConvolutionAudit audit_convolution(int n_max, long j_max) {
  ConvolutionAudit out;
  out.n_max = n_max;
  out.j_max = j_max;
  const double k = convolution_constant();
  for (int n = 0; n <= n_max; ++n) {
    for (int m = n; m <= n_max; ++m) {  // symmetric in (n, m)
      const double s = convolution_partial_sum(n, m, j_max) + convolution_tail_bound(n, m, j_max);
      const double ratio = s * bracket(m - n) / k;
      if (ratio > out.worst_ratio) {
        out.worst_ratio = ratio;
        out.worst_n = n;
        out.worst_m = m;
      }
    }
  }
  return out;
}

BlockOperator random_block_operator(int num_blocks, int block_dim, double decay, double density,
                                    std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  BlockOperator a(num_blocks, block_dim);
  for (int n = 0; n < num_blocks; ++n) {
    for (int m = 0; m < num_blocks; ++m) {
      if (n != m && unif(rng) > density) continue;
      Mat blk(block_dim, block_dim);
      for (int i = 0; i < block_dim; ++i) {
        for (int j = 0; j < block_dim; ++j) blk(i, j) = cplx(gauss(rng), gauss(rng));
      }
      a.set_block(n, m, blk * std::pow(bracket(n - m), -decay));
    }
  }
  return a;
}

ProductNormAudit audit_product_norm(int samples, std::uint64_t seed, int max_blocks) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> blocks(2, std::max(2, max_blocks));
  std::uniform_int_distribution<int> dims(1, 4);
  std::uniform_real_distribution<double> decay(0.0, 3.0);
  std::uniform_real_distribution<double> density(0.3, 1.0);
  const double k = convolution_constant();
  ProductNormAudit out;
  out.samples = samples;
  for (int s = 0; s < samples; ++s) {
    const int nb = blocks(rng);
    const int bd = dims(rng);
    const BlockOperator a = random_block_operator(nb, bd, decay(rng), density(rng), rng);
    const BlockOperator b = random_block_operator(nb, bd, decay(rng), density(rng), rng);
    const double lhs = weighted_norm(compose(a, b), 1).value;
    const double rhs = k * weighted_norm(a, 2).value * weighted_norm(b, 1).value;
    out.worst_ratio = std::max(out.worst_ratio, lhs / rhs);
  }
  return out;
}

DigammaAudit audit_digamma(int x_max, long terms) {
  DigammaAudit out;
  out.x_max = x_max;
  out.terms = terms;
  for (int x = 1; x <= x_max; ++x) {
    double sum = 0.0;
    for (long j = terms; j >= 1; --j) {
      const double jd = static_cast<double>(j);
      sum += x / (jd * (jd + x));
    }
    // integral of x/(t(t+x)) over [terms + 1/2, inf)
    const double t0 = terms + 0.5;
    sum += std::log1p(x / t0);
    double harmonic = 0.0;
    for (int j = x; j >= 1; --j) harmonic += 1.0 / j;
    out.worst_vs_digamma = std::max(
        out.worst_vs_digamma, std::abs(sum - (special::digamma(x + 1.0) + special::kEulerGamma)));
    out.worst_vs_harmonic = std::max(out.worst_vs_harmonic, std::abs(sum - harmonic));
  }
  return out;
}

}  // namespace magflow

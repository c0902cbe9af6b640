#pragma once

#include <cstdint>
#include <random>

#include "magflow/block_operator.hpp"

namespace magflow {

/// sum_{0 <= j <= j_max, j != n, m} <j-n>^-2 <j-m>^-1
double convolution_partial_sum(int n, int m, long j_max);
/// Upper bound on the remainder j > j_max: 1/(2 (j_max - max(n,m))^2).
double convolution_tail_bound(int n, int m, long j_max);

struct ConvolutionAudit {
  int n_max = 0;
  long j_max = 0;
  // max over pairs of (partial + tail) <m-n> / K; the estimate holds iff <= 1
  double worst_ratio = 0.0;
  int worst_n = 0;
  int worst_m = 0;
  bool holds() const { return worst_ratio <= 1.0; }
};

ConvolutionAudit audit_convolution(int n_max, long j_max);

/// Random operator with Gaussian entries; block (n, m) is scaled by
/// <n-m>^-decay and stored with probability `density` (diagonal always).
BlockOperator random_block_operator(int num_blocks, int block_dim, double decay, double density,
                                    std::mt19937_64& rng);

struct ProductNormAudit {
  int samples = 0;
  // max of ||AB||_1 / (K ||A||_2 ||B||_1)
  double worst_ratio = 0.0;
  bool holds() const { return worst_ratio <= 1.0; }
};

/// Samples pairs with 2..max_blocks blocks, block_dim 1..4 and mixed decay.
ProductNormAudit audit_product_norm(int samples, std::uint64_t seed, int max_blocks = 12);

struct DigammaAudit {
  int x_max = 0;
  long terms = 0;
  double worst_vs_digamma = 0.0;   // |series - (psi_0(x+1) + gamma)|
  double worst_vs_harmonic = 0.0;  // |series - H_x|
};

/// Partial sums of sum_j x/(j(j+x)) up to `terms`, completed by the integral
/// of the summand over [terms + 1/2, inf), for x = 1..x_max.
DigammaAudit audit_digamma(int x_max, long terms);

}  // namespace magflow

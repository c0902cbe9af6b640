#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "magflow/block_operator.hpp"
#include "magflow/landau.hpp"

namespace magflow {

struct Atom {
  double w = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
};

/// V(q) = sum_i w_i exp(-(q - y_i)^2 / 2), a finite atomic measure convolved
/// with the unit Gaussian.
struct GaussianMixture {
  std::vector<Atom> atoms;

  double total_variation() const;
  GaussianMixture scaled(double factor) const;
};

GaussianMixture single_atom(double y1, double y2, double w);

/// One atom per integer site in [-w, w]^2, weights i.i.d. uniform on
/// [amplitude_low, amplitude_high].
///
/// Generator: std::mt19937_64 seeded with `seed`; each weight uses one draw x
/// mapped to u = (x >> 11) * 2^-53 in [0, 1). Sites are visited with y1 as the
/// outer and y2 as the inner loop, both ascending.
struct AndersonSpec {
  int grid_half_width = 10;
  double amplitude_low = -1.0;
  double amplitude_high = 1.0;
  std::uint64_t seed = 7;
};

GaussianMixture anderson_mixture(const AndersonSpec& spec);

/// Pointwise value; atoms with (q - y)^2 > 80 are skipped.
double eval_potential(const GaussianMixture& mix, double q1, double q2);

/// Rows (q1, q2, V) on a points x points grid over [lo, hi]^2.
std::vector<std::array<double, 3>> potential_raster(const GaussianMixture& mix, double lo,
                                                    double hi, int points);

struct AssemblyOptions {
  // Blocks with <n-m> sigma_max below cutoff * (largest block norm) are dropped.
  double cutoff = 1e-14;
  // Worker cap; 0 means hardware concurrency. The result does not depend on it.
  int threads = 0;
};

struct AssemblyDiagnostics {
  double hermitian_deviation_before_symmetrization = 0.0;
  int dropped_blocks = 0;
  int skipped_atoms = 0;
  // max |entry| on truncation-edge rows/columns over max |entry| in the interior.
  double edge_to_interior_ratio = 0.0;
};

/// Matrix of V on the truncated (n, k) basis. Each atom contributes
///   w_i D(alpha_i) G D(alpha_i)^dagger
/// where G is the centered Gaussian (shifted diagonal in k) and D the
/// magnetic translation on the center factor. The inner sum over center
/// states runs over the full support of G, not just the first n_center
/// states, so every stored entry is the exact matrix element.
BlockOperator assemble(const GaussianMixture& mix, const Truncation& trunc,
                       const AssemblyOptions& options = {},
                       AssemblyDiagnostics* diagnostics = nullptr);

struct DecayRow {
  int n = 0;
  int m = 0;
  double weighted_norm = 0.0;  // <n-m> sigma_max(block(n, m))
};

struct DecayProfile {
  std::vector<DecayRow> rows;
  double d_emp = 0.0;
};

DecayProfile decay_profile(const BlockOperator& v);

}  // namespace magflow

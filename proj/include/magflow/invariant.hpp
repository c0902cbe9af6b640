#pragma once

#include <string>
#include <vector>

#include "magflow/block_operator.hpp"
#include "magflow/flow.hpp"
#include "magflow/landau.hpp"

namespace magflow {

/// H_La = sum_n (n + 1/2) P_n on the truncated basis.
BlockOperator landau_diagonal(const Truncation& trunc);

/// H = H_La + V. Throws StructuralError when V does not match the truncation.
BlockOperator build_hamiltonian(const BlockOperator& v, const Truncation& trunc);

struct InvariantReport {
  int interior_levels = 0;
  int interior_centers = 0;
  int steps = 0;
  double initial_off_norm_1 = 0.0;
  double final_off_norm_1 = 0.0;

  double commutator_residual = 0.0;       // ||[H, J]||_0 restricted to the interior window
  double commutator_residual_full = 0.0;  // same, whole truncated space
  double blockdiag_residual = 0.0;        // ||O H_inf||_0 on the interior window
  double spectrum_error = 0.0;            // sorted eig(H) vs eig(H_inf)
  double j_spectrum_error = 0.0;          // sorted eig(J) vs the Landau multiset
  double conjugation_error = 0.0;         // ||U H U^dagger - H_inf||_0
  double unitarity_defect = 0.0;          // ||U^dagger U - I||_0

  // Filled by the time-evolution stage; negative when not run.
  double evolution_drift_j = -1.0;
  double evolution_drift_hla = -1.0;
};

struct InvariantResult {
  BlockOperator j;      // U^dagger H_La U
  BlockOperator h_inf;  // U H U^dagger
  BlockOperator u;
  IterationTrace trace;
  InvariantReport report;
};

/// Runs the flow on H and forms J = U^dagger H_La U.
InvariantResult construct_invariant(const BlockOperator& h, const Truncation& trunc,
                                    const IterateOptions& options = {});

struct EvolutionRow {
  double t = 0.0;
  double exp_j = 0.0;
  double exp_hla = 0.0;
  double norm_defect = 0.0;  // | ||psi_t|| - 1 |
};

struct EvolutionTable {
  std::vector<EvolutionRow> rows;
  double drift_j = 0.0;    // max_t |<J>_t - <J>_0| / |<J>_0|
  double drift_hla = 0.0;  // same for H_La
};

/// psi_t = exp(-i H t) psi0 by the eigendecomposition of the dense H.
/// Throws UnnormalizedState when | ||psi0|| - 1 | > 1e-10, and DomainError when
/// `window` is given and psi0 has weight > 1e-12 outside its interior.
EvolutionTable evolve_expectations(const BlockOperator& h, const BlockOperator& j, const Vec& psi0,
                                   const std::vector<double>& times,
                                   const Truncation* window = nullptr);

/// Basis vector |n, k>.
Vec landau_state(const Truncation& trunc, int n, int k);
/// Equal-weight superposition of |n, k> over the given levels.
Vec level_superposition(const Truncation& trunc, const std::vector<int>& levels, int k);
/// Level-n packet with amplitudes exp(-(k - center)^2 / (4 spread^2)) over the
/// interior center states, normalized.
Vec gaussian_packet(const Truncation& trunc, double center, double spread, int level = 0);

/// Parses "landau N K", "levels N1,N2,... K" or "gaussian-packet CENTER SPREAD [LEVEL]".
Vec state_from_preset(const std::string& preset, const Truncation& trunc);

/// Evenly spaced samples t_i = i * t_max / (count - 1), i = 0..count-1.
std::vector<double> linspace_times(double t_max, int count);

}  // namespace magflow

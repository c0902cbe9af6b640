#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "magflow/block_operator.hpp"
#include "magflow/homological.hpp"

namespace magflow {

/// phi(x) = e^x - (e^x - 1)/x = sum_{k>=1} k/(k+1)! x^k, phi(0) = 0.
double phi(double x);
/// psi(x) = x phi(x) = (x - 1) e^x + 1.
double psi(double x);

/// phi(L_W)(X) = sum_{k>=1} k/(k+1)! L_W^k(X) with L_W(A) = [W, A].
///
/// The series stops once sum_{j>k} j/(j+1)! (2w)^j x < series_tol, where w and
/// x are operator-norm bounds (block Schur bounds) of W and X. Throws
/// SeriesDivergenceGuard when ||W||_0 >= 5.
BlockOperator phi_apply(const BlockOperator& w, const BlockOperator& x, double series_tol);

/// e^W for antiselfadjoint W via the eigendecomposition of the Hermitian iW.
/// Throws NotAntihermitian if ||W + W^dagger||_0 > 1e-10.
BlockOperator exp_antihermitian(const BlockOperator& w);
Mat exp_antihermitian_dense(const Mat& w);

struct StepRecord {
  int step = 0;
  double off_norm_1 = 0.0;       // ||O H_s||_1
  double diag_drift = 0.0;       // ||D H_s - reference||_0
  double w_norm = 0.0;           // ||W_s||_0
  double w_norm_2 = 0.0;         // ||W_s||_2
  double psi_bound_slack = 0.0;  // (g/2piK) psi((2piK/g) ||O H_s||_1) - ||O H_{s+1}||_1
  double spectrum_error = 0.0;   // max sorted-eigenvalue displacement of H_{s+1} vs H_0

  // Diagnostics beyond the exported CSV columns.
  double gap_gamma = 0.0;         // gamma_estimate of D H_s
  double min_gap_ratio = 0.0;     // min over pairs of dist(n,m) / (gamma <n-m>)
  double diag_change = 0.0;       // ||D H_{s+1} - D H_0||_0
  double cross_check_error = -1;  // ||e^W H_s e^-W - H_{s+1}||_0, -1 when skipped
  int series_terms = 0;
  LemmaGammaCheck lemma;
};

struct IterationTrace {
  std::vector<StepRecord> steps;
  double initial_off_norm_1 = 0.0;
  double final_off_norm_1 = 0.0;

  // ||O H_s||_1 for s = 0..steps, including the final state.
  std::vector<double> off_norm_sequence() const;
  // lambda_s := ||O H_s||_1^{1/2^s}
  std::vector<double> empirical_lambda() const;
};

/// Least-squares slope of log a_{s+1} against log a_s over the first
/// `count` strictly decreasing, positive terms of the sequence.
/// Returns NaN when fewer than two pairs are available.
double doubling_exponent(const std::vector<double>& sequence, int count);

class MaxStepsExceeded : public std::runtime_error {
 public:
  explicit MaxStepsExceeded(IterationTrace trace);
  const IterationTrace& trace() const { return trace_; }

 private:
  IterationTrace trace_;
};

struct IterateOptions {
  double gamma = 1.0;
  double tol = 1e-12;
  int max_steps = 30;
  // 0 selects 1 for num_blocks <= 16 and never otherwise.
  int cross_check_every = 0;
  double cross_check_tol = 1e-9;
  // Defaults to 1e-17 * ||O H_s||_0 per step.
  std::optional<double> series_tol;
  // Diagonal reference for diag_drift; defaults to D H_0.
  std::optional<BlockOperator> reference_diag;
  bool track_spectrum = true;
  bool check_lemma = true;
};

struct FlowResult {
  BlockOperator h_inf;
  BlockOperator unitary;  // U_total = e^{W_s} ... e^{W_0}, U H_0 U^dagger = H_inf
  IterationTrace trace;
};

/// Superconvergent block diagonalization
///   H_{s+1} = D H_s + phi(L_{W_s})(O H_s),  [D H_s, W_s] = O H_s,
/// until ||O H_s||_1 <= tol.
FlowResult iterate(const BlockOperator& h0, const IterateOptions& options = {});

}  // namespace magflow

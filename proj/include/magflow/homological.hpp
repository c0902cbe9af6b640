#pragma once

#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "magflow/block_operator.hpp"

namespace magflow {

/// Spectral separation of the diagonal blocks of a block-diagonal Hermitian
/// operator.
struct GapReport {
  // min |alpha - beta| over eigenvalues of blocks n and m, for n < m.
  std::map<BlockKey, double> distance;
  double global_min_over_band = std::numeric_limits<double>::infinity();
  // min over adjacent levels of (min sigma_{n+1} - max sigma_n), clamped at 0.
  // +inf when there is a single block.
  double gamma_estimate = std::numeric_limits<double>::infinity();
};

/// Eigen-decomposition of every diagonal block, computed once per step.
struct DiagonalSpectra {
  std::vector<Eigen::VectorXd> values;  // ascending
  std::vector<Mat> vectors;
};

DiagonalSpectra diagonal_spectra(const BlockOperator& hd);

GapReport gap_report(const BlockOperator& hd);
GapReport gap_report(const DiagonalSpectra& spectra);

struct HomologicalSolution {
  BlockOperator generator;  // W, antiselfadjoint, DW = 0
  GapReport report;
};

// 1e-12 * max(1, ||Hd||_0)
double default_homological_tol(const BlockOperator& hd);

/// Solves [Hd, W] = V with DW = 0 block by block:
///   Hd_n W_nm - W_nm Hd_m = V_nm,
/// by diagonalizing Hd_n and Hd_m and dividing entrywise by the eigenvalue
/// differences. Pairs with no stored V block are skipped.
///
/// Throws GapViolation when the spectra of a coupled pair are within tol, and
/// StructuralError when Hd has off-diagonal blocks or V has diagonal ones.
HomologicalSolution solve_homological(const BlockOperator& hd, const BlockOperator& v,
                                      std::optional<double> tol = std::nullopt);
HomologicalSolution solve_homological(const BlockOperator& hd, const DiagonalSpectra& spectra,
                                      const BlockOperator& v, std::optional<double> tol);

/// Norm bounds of the homological lemma, evaluated on one solve.
struct LemmaGammaCheck {
  double gamma = 0.0;
  double v_norm_1 = 0.0;
  double w_norm_0 = 0.0;   // sup of block norms
  double w_op_norm = 0.0;  // operator norm of the flattened W
  double w_norm_2 = 0.0;
  double bound_0 = 0.0;  // pi zeta(2)/gamma ||V||_1
  double bound_2 = 0.0;  // pi/(2 gamma) ||V||_1
  bool holds() const { return w_norm_0 <= bound_0 && w_op_norm <= bound_0 && w_norm_2 <= bound_2; }
};

LemmaGammaCheck check_lemma_gamma(const BlockOperator& w, const BlockOperator& v, double gamma);

}  // namespace magflow

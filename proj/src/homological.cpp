#include "magflow/homological.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "magflow/errors.hpp"
#include "magflow/special.hpp"

namespace magflow {

GapViolation::GapViolation(int n, int m, double distance)
    : std::runtime_error("spectral gap violation between blocks " + std::to_string(n) + " and " +
                         std::to_string(m) + ": distance " + std::to_string(distance)),
      n_(n),
      m_(m),
      distance_(distance) {}

DiagonalSpectra diagonal_spectra(const BlockOperator& hd) {
  DiagonalSpectra out;
  const int nb = hd.num_blocks();
  out.values.resize(nb);
  out.vectors.resize(nb);
  for (int n = 0; n < nb; ++n) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hd.block(n, n));
    out.values[n] = es.eigenvalues();
    out.vectors[n] = es.eigenvectors();
  }
  return out;
}

GapReport gap_report(const DiagonalSpectra& spectra) {
  GapReport report;
  const int nb = static_cast<int>(spectra.values.size());
  for (int n = 0; n < nb; ++n) {
    for (int m = n + 1; m < nb; ++m) {
      const auto& a = spectra.values[n];
      const auto& b = spectra.values[m];
      // Both ascending: merge-style scan for the closest pair.
      double best = std::numeric_limits<double>::infinity();
      Eigen::Index i = 0;
      Eigen::Index j = 0;
      while (i < a.size() && j < b.size()) {
        best = std::min(best, std::abs(a(i) - b(j)));
        if (a(i) < b(j)) {
          ++i;
        } else {
          ++j;
        }
      }
      report.distance[{n, m}] = best;
      report.global_min_over_band = std::min(report.global_min_over_band, best);
    }
    if (n + 1 < nb) {
      const double gap = spectra.values[n + 1].minCoeff() - spectra.values[n].maxCoeff();
      report.gamma_estimate = std::min(report.gamma_estimate, std::max(gap, 0.0));
    }
  }
  return report;
}

GapReport gap_report(const BlockOperator& hd) { return gap_report(diagonal_spectra(hd)); }

double default_homological_tol(const BlockOperator& hd) {
  return 1e-12 * std::max(1.0, weighted_norm(hd, 0).value);
}

HomologicalSolution solve_homological(const BlockOperator& hd, const BlockOperator& v,
                                      std::optional<double> tol) {
  return solve_homological(hd, diagonal_spectra(hd), v, tol);
}

HomologicalSolution solve_homological(const BlockOperator& hd, const DiagonalSpectra& spectra,
                                      const BlockOperator& v, std::optional<double> tol) {
  if (hd.num_blocks() != v.num_blocks() || hd.block_dim() != v.block_dim()) {
    throw StructuralError("solve_homological: shape mismatch");
  }
  for (const auto& [key, blk] : hd.blocks()) {
    if (key.first != key.second) throw StructuralError("solve_homological: Hd not block-diagonal");
  }
  for (const auto& [key, blk] : v.blocks()) {
    if (key.first == key.second) throw StructuralError("solve_homological: V has diagonal blocks");
  }
  const double eps = tol.value_or(default_homological_tol(hd));

  HomologicalSolution sol{BlockOperator(hd.num_blocks(), hd.block_dim()), gap_report(spectra)};
  for (const auto& [key, vblk] : v.blocks()) {
    const auto [n, m] = key;
    // Solve each unordered pair once, from its upper block.
    if (n > m && v.has_block(m, n)) continue;
    const int lo = std::min(n, m);
    const int hi = std::max(n, m);
    const double dist = sol.report.distance.at({lo, hi});
    if (dist <= eps) throw GapViolation(n, m, dist);

    const Mat upper = n < m ? vblk : Mat(vblk.adjoint());
    const auto& alpha = spectra.values[lo];
    const auto& beta = spectra.values[hi];
    const Mat& un = spectra.vectors[lo];
    const Mat& um = spectra.vectors[hi];
    Mat t = un.adjoint() * upper * um;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      for (Eigen::Index j = 0; j < t.cols(); ++j) t(i, j) /= (alpha(i) - beta(j));
    }
    Mat w = un * t * um.adjoint();
    sol.generator.set_block(hi, lo, -w.adjoint());
    sol.generator.set_block(lo, hi, std::move(w));
  }
  return sol;
}

LemmaGammaCheck check_lemma_gamma(const BlockOperator& w, const BlockOperator& v, double gamma) {
  LemmaGammaCheck c;
  c.gamma = gamma;
  c.v_norm_1 = weighted_norm(v, 1).value;
  c.w_norm_0 = weighted_norm(w, 0).value;
  c.w_norm_2 = weighted_norm(w, 2).value;
  c.w_op_norm = operator_norm(w);
  c.bound_0 = std::numbers::pi * special::kZeta2 / gamma * c.v_norm_1;
  c.bound_2 = std::numbers::pi / (2.0 * gamma) * c.v_norm_1;
  return c;
}

}  // namespace magflow

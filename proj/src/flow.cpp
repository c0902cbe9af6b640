#include "magflow/flow.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "magflow/errors.hpp"

namespace magflow {

double phi(double x) {
  if (std::abs(x) < 0.5) {
    // sum_{k>=1} k x^k/(k+1)!
    double term = 1.0;  // x^k/(k+1)! at k = 0
    double sum = 0.0;
    for (int k = 1; k < 40; ++k) {
      term *= x / (k + 1);
      const double add = k * term;
      sum += add;
      if (std::abs(add) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::exp(x) - std::expm1(x) / x;
}

double psi(double x) { return x * phi(x); }

namespace {

// sum_{j>k} j/(j+1)! y^j for y >= 0
double phi_tail(int k, double y) {
  double term = 1.0;  // y^j/(j+1)!
  for (int j = 1; j <= k; ++j) term *= y / (j + 1);
  double sum = 0.0;
  for (int j = k + 1; j < k + 400; ++j) {
    term *= y / (j + 1);
    const double add = j * term;
    sum += add;
    if (add <= 1e-20 * sum || add == 0.0) break;
  }
  return sum;
}

Eigen::VectorXd sorted_eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

BlockOperator phi_apply(const BlockOperator& w, const BlockOperator& x, double series_tol) {
  const double w0 = weighted_norm(w, 0).value;
  if (!(w0 < 5.0)) {
    throw SeriesDivergenceGuard("phi_apply: ||W||_0 = " + std::to_string(w0) + " >= 5");
  }
  BlockOperator result = BlockOperator::zero_like(x);
  result.set_hermitian(false);
  if (w.empty() || x.empty()) return result;

  const double y = 2.0 * schur_norm_bound(w);
  const double xb = schur_norm_bound(x);
  BlockOperator term = x;
  double coeff = 1.0;  // 1/(k+1)!
  for (int k = 1; k < 200; ++k) {
    term = commutator(w, term);
    coeff /= (k + 1);
    result += (k * coeff) * term;
    if (term.empty() || phi_tail(k, y) * xb < series_tol) break;
  }
  return result;
}

Mat exp_antihermitian_dense(const Mat& w) {
  const double dev = (w + w.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-10) {
    throw NotAntihermitian("exp_antihermitian: ||W + W^dagger|| = " + std::to_string(dev));
  }
  // W = -i M with M = iW Hermitian, so e^W = V e^{-i Lambda} V^dagger.
  const Mat m = cplx(0.0, 1.0) * w;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()));
  const Eigen::VectorXd& lam = es.eigenvalues();
  Vec phases(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) phases(i) = std::polar(1.0, -lam(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

BlockOperator exp_antihermitian(const BlockOperator& w) {
  const double dev = weighted_norm(w + adjoint(w), 0).value;
  if (dev > 1e-10) {
    throw NotAntihermitian("exp_antihermitian: ||W + W^dagger||_0 = " + std::to_string(dev));
  }
  return BlockOperator::from_dense(exp_antihermitian_dense(w.to_dense()), w.num_blocks(),
                                   w.block_dim());
}

std::vector<double> IterationTrace::off_norm_sequence() const {
  std::vector<double> seq;
  seq.reserve(steps.size() + 1);
  for (const auto& s : steps) seq.push_back(s.off_norm_1);
  seq.push_back(final_off_norm_1);
  return seq;
}

std::vector<double> IterationTrace::empirical_lambda() const {
  std::vector<double> out;
  const auto seq = off_norm_sequence();
  for (std::size_t s = 0; s < seq.size(); ++s) {
    out.push_back(std::pow(seq[s], 1.0 / std::ldexp(1.0, static_cast<int>(s))));
  }
  return out;
}

double doubling_exponent(const std::vector<double>& sequence, int count) {
  std::vector<double> terms;
  for (std::size_t i = 0; i < sequence.size() && static_cast<int>(terms.size()) < count; ++i) {
    const double v = sequence[i];
    if (!(v > 0.0)) break;
    if (!terms.empty() && v >= terms.back()) break;
    terms.push_back(v);
  }
  if (terms.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t pairs = terms.size() - 1;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    mx += std::log(terms[i]);
    my += std::log(terms[i + 1]);
  }
  mx /= pairs;
  my /= pairs;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const double dx = std::log(terms[i]) - mx;
    sxy += dx * (std::log(terms[i + 1]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

MaxStepsExceeded::MaxStepsExceeded(IterationTrace trace)
    : std::runtime_error("iteration did not reach tolerance within max_steps"),
      trace_(std::move(trace)) {}

FlowResult iterate(const BlockOperator& h0, const IterateOptions& options) {
  const int nb = h0.num_blocks();
  const int bd = h0.block_dim();
  const double h0_norm = weighted_norm(h0, 0).value;
  const double herm_dev = h0.hermitian_deviation();
  if (herm_dev > 1e-10 * (1.0 + h0_norm)) {
    throw StructuralError("iterate: H0 is not Hermitian (deviation " + std::to_string(herm_dev) +
                          ")");
  }
  const int cross_every = options.cross_check_every > 0 ? options.cross_check_every
                          : nb <= 16                    ? 1
                                                        : 0;
  const BlockOperator reference = options.reference_diag.value_or(diag_part(h0));
  const BlockOperator diag0 = diag_part(h0);

  Eigen::VectorXd ev0;
  if (options.track_spectrum) ev0 = sorted_eigenvalues(h0.to_dense());

  BlockOperator h = symmetrize(h0);
  BlockOperator off = offdiag_part(h);
  double off1 = weighted_norm(off, 1).value;
  Mat u_total = Mat::Identity(h0.dim(), h0.dim());

  FlowResult result{h, BlockOperator::identity(nb, bd), {}};
  result.trace.initial_off_norm_1 = off1;
  if (off1 > options.gamma / 8.0) {
    spdlog::warn("||O H_0||_1 = {:.6g} exceeds gamma/8 = {:.6g}; convergence is not guaranteed",
                 off1, options.gamma / 8.0);
  }

  const double kscale = 2.0 * std::numbers::pi * convolution_constant() / options.gamma;
  int step = 0;
  while (off1 > options.tol) {
    if (step >= options.max_steps) {
      result.trace.final_off_norm_1 = off1;
      throw MaxStepsExceeded(std::move(result.trace));
    }
    StepRecord rec;
    rec.step = step;
    rec.off_norm_1 = off1;

    const BlockOperator diag = diag_part(h);
    rec.diag_drift = weighted_norm(diag - reference, 0).value;
    const DiagonalSpectra spectra = diagonal_spectra(diag);
    HomologicalSolution sol = solve_homological(diag, spectra, off, std::nullopt);
    const BlockOperator& w = sol.generator;
    rec.gap_gamma = sol.report.gamma_estimate;
    rec.min_gap_ratio = std::numeric_limits<double>::infinity();
    for (const auto& [key, dist] : sol.report.distance) {
      rec.min_gap_ratio = std::min(
          rec.min_gap_ratio, dist / (options.gamma * bracket(key.first - key.second)));
    }
    rec.w_norm = weighted_norm(w, 0).value;
    rec.w_norm_2 = weighted_norm(w, 2).value;
    if (options.check_lemma) rec.lemma = check_lemma_gamma(w, off, sol.report.gamma_estimate);

    const double series_tol =
        options.series_tol.value_or(1e-17 * std::max(weighted_norm(off, 0).value, 1e-300));
    BlockOperator next = symmetrize(diag + phi_apply(w, off, series_tol));

    const Mat uw = exp_antihermitian_dense(w.to_dense());
    u_total = (uw * u_total).eval();
    if (cross_every > 0 && step % cross_every == 0) {
      const Mat conj = uw * h.to_dense() * uw.adjoint();
      const BlockOperator diff = BlockOperator::from_dense(conj, nb, bd) - next;
      rec.cross_check_error = weighted_norm(diff, 0).value;
      if (rec.cross_check_error > options.cross_check_tol * (1.0 + h0_norm)) {
        throw CrossCheckFailure("phi-series step " + std::to_string(step) +
                                " disagrees with explicit conjugation by " +
                                std::to_string(rec.cross_check_error));
      }
    }

    BlockOperator next_off = offdiag_part(next);
    const double next_off1 = weighted_norm(next_off, 1).value;
    rec.psi_bound_slack = psi(kscale * off1) / kscale - next_off1;
    rec.diag_change = weighted_norm(diag_part(next) - diag0, 0).value;
    if (options.track_spectrum) {
      rec.spectrum_error = (sorted_eigenvalues(next.to_dense()) - ev0).cwiseAbs().maxCoeff();
    }
    spdlog::debug("step {}: ||O H||_1 = {:.3e} -> {:.3e}, ||W||_0 = {:.3e}", step, off1, next_off1,
                  rec.w_norm);
    result.trace.steps.push_back(rec);

    h = std::move(next);
    off = std::move(next_off);
    off1 = next_off1;
    ++step;
  }
  result.trace.final_off_norm_1 = off1;

  if (step > 0) {
    const Mat conj = u_total * h0.to_dense() * u_total.adjoint();
    const double err =
        weighted_norm(BlockOperator::from_dense(conj, nb, bd) - h, 0).value;
    if (err > 1e-9 * (1.0 + h0_norm)) {
      throw CrossCheckFailure("accumulated unitary does not reproduce H_inf: error " +
                              std::to_string(err));
    }
    result.unitary = BlockOperator::from_dense(u_total, nb, bd);
  }
  result.h_inf = std::move(h);
  result.h_inf.set_hermitian(true);
  return result;
}

}  // namespace magflow

#include "magflow/potential.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "magflow/errors.hpp"

namespace magflow {

double GaussianMixture::total_variation() const {
  double tv = 0.0;
  for (const auto& a : atoms) tv += std::abs(a.w);
  return tv;
}

GaussianMixture GaussianMixture::scaled(double factor) const {
  GaussianMixture out = *this;
  for (auto& a : out.atoms) a.w *= factor;
  return out;
}

GaussianMixture single_atom(double y1, double y2, double w) { return {{Atom{w, y1, y2}}}; }

GaussianMixture anderson_mixture(const AndersonSpec& spec) {
  if (spec.grid_half_width < 0) throw DomainError("anderson: grid_half_width must be >= 0");
  if (!(spec.amplitude_low <= spec.amplitude_high)) {
    throw DomainError("anderson: amplitude_low must not exceed amplitude_high");
  }
  std::mt19937_64 gen(spec.seed);
  const double span = spec.amplitude_high - spec.amplitude_low;
  GaussianMixture mix;
  const int w = spec.grid_half_width;
  mix.atoms.reserve(static_cast<std::size_t>(2 * w + 1) * (2 * w + 1));
  for (int i = -w; i <= w; ++i) {
    for (int j = -w; j <= w; ++j) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      mix.atoms.push_back({spec.amplitude_low + span * u, static_cast<double>(i),
                           static_cast<double>(j)});
    }
  }
  return mix;
}

double eval_potential(const GaussianMixture& mix, double q1, double q2) {
  double v = 0.0;
  for (const auto& a : mix.atoms) {
    const double d2 = (q1 - a.y1) * (q1 - a.y1) + (q2 - a.y2) * (q2 - a.y2);
    if (d2 > 80.0) continue;
    v += a.w * std::exp(-0.5 * d2);
  }
  return v;
}

std::vector<std::array<double, 3>> potential_raster(const GaussianMixture& mix, double lo,
                                                    double hi, int points) {
  if (points < 2 || !(hi > lo)) throw DomainError("raster: need points >= 2 and hi > lo");
  std::vector<std::array<double, 3>> rows;
  rows.reserve(static_cast<std::size_t>(points) * points);
  const double h = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      const double q1 = lo + i * h;
      const double q2 = lo + j * h;
      rows.push_back({q1, q2, eval_potential(mix, q1, q2)});
    }
  }
  return rows;
}

namespace {

// Centered-Gaussian elements el(n, m, l) for l in [lo, lo + size).
struct ElementBand {
  int lo = 0;
  std::vector<double> values;
};

ElementBand element_band(int n, int m) {
  ElementBand band;
  band.lo = -std::min(n, m);
  double peak = 0.0;
  for (int l = band.lo;; ++l) {
    const double v = gaussian_element(n, m, l);
    peak = std::max(peak, std::abs(v));
    band.values.push_back(v);
    // Past the peak (which sits below l = n + m) the terms decay like 2^-l.
    if (l > n + m + 8 && std::abs(v) < 1e-20 * peak) break;
  }
  return band;
}

constexpr std::size_t kChunk = 8;

}  // namespace

BlockOperator assemble(const GaussianMixture& mix, const Truncation& trunc,
                       const AssemblyOptions& options, AssemblyDiagnostics* diagnostics) {
  trunc.validate();
  const int nl = trunc.n_landau;
  const int nc = trunc.n_center;

  std::vector<ElementBand> bands(static_cast<std::size_t>(nl) * nl);
  int max_col = 0;
  double g_abs_sum = 0.0;
  for (int n = 0; n < nl; ++n) {
    for (int m = 0; m < nl; ++m) {
      auto& b = bands[n * nl + m];
      b = element_band(n, m);
      const int last_l = b.lo + static_cast<int>(b.values.size()) - 1;
      max_col = std::max(max_col, std::max(n, m) + last_l + 1);
      for (double v : b.values) g_abs_sum += std::abs(v);
    }
  }
  const int cols = std::max(max_col, nc);
  const double tv = mix.total_variation();

  const std::size_t num_atoms = mix.atoms.size();
  const std::size_t num_chunks = (num_atoms + kChunk - 1) / kChunk;
  std::vector<std::vector<Mat>> partial(num_chunks);
  std::vector<int> skipped(num_chunks, 0);

  auto run_chunk = [&](std::size_t c) {
    std::vector<Mat> acc(static_cast<std::size_t>(nl) * nl, Mat::Zero(nc, nc));
    const std::size_t end = std::min(num_atoms, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const Atom& atom = mix.atoms[i];
      if (atom.w == 0.0) {
        ++skipped[c];
        continue;
      }
      const Mat r = displacement_matrix(alpha_from_shift(atom.y1, atom.y2), nc, cols);
      const double rmax = r.cwiseAbs2().maxCoeff();
      if (std::abs(atom.w) * rmax * g_abs_sum * nc < 1e-17 * tv) {
        ++skipped[c];
        continue;
      }
      for (int n = 0; n < nl; ++n) {
        for (int m = 0; m < nl; ++m) {
          const auto& b = bands[n * nl + m];
          const int len = static_cast<int>(b.values.size());
          const int j0 = n + b.lo;  // first row center index, l = lo
          const int jp0 = m + b.lo;
          const int use = std::min(len, cols - std::max(j0, jp0));
          if (use <= 0) continue;
          Mat left = r.middleCols(j0, use);
          for (int t = 0; t < use; ++t) left.col(t) *= atom.w * b.values[t];
          acc[n * nl + m].noalias() += left * r.middleCols(jp0, use).adjoint();
        }
      }
    }
    partial[c] = std::move(acc);
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::min<std::size_t>(num_chunks, options.threads > 0 ? options.threads : hw);
  if (workers <= 1) {
    for (std::size_t c = 0; c < num_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t c = t; c < num_chunks; c += workers) run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Fixed-order reduction keeps the result independent of the worker count.
  std::vector<Mat> total(static_cast<std::size_t>(nl) * nl, Mat::Zero(nc, nc));
  int skipped_atoms = 0;
  for (std::size_t c = 0; c < num_chunks; ++c) {
    skipped_atoms += skipped[c];
    for (std::size_t b = 0; b < total.size(); ++b) total[b] += partial[c][b];
  }

  BlockOperator raw(nl, nc);
  double max_norm = 0.0;
  std::vector<double> norms(total.size(), 0.0);
  for (int n = 0; n < nl; ++n) {
    for (int m = 0; m < nl; ++m) {
      norms[n * nl + m] = spectral_norm(total[n * nl + m]);
      max_norm = std::max(max_norm, norms[n * nl + m]);
    }
  }
  int dropped = 0;
  for (int n = 0; n < nl; ++n) {
    for (int m = 0; m < nl; ++m) {
      const double wn = bracket(n - m) * norms[n * nl + m];
      if (wn == 0.0 || wn < options.cutoff * max_norm) {
        if (wn != 0.0) ++dropped;
        continue;
      }
      raw.set_block(n, m, std::move(total[n * nl + m]));
    }
  }
  if (dropped > 0) spdlog::debug("assemble: dropped {} negligible blocks", dropped);

  const double dev = raw.hermitian_deviation();
  spdlog::debug("assemble: Hermitian deviation before symmetrization {:.3e}", dev);

  double edge = 0.0;
  double interior = 0.0;
  for (const auto& [key, blk] : raw.blocks()) {
    for (int i = 0; i < nc; ++i) {
      for (int j = 0; j < nc; ++j) {
        const double a = std::abs(blk(i, j));
        const bool inside = trunc.in_interior(key.first, i) && trunc.in_interior(key.second, j);
        (inside ? interior : edge) = std::max(inside ? interior : edge, a);
      }
    }
  }
  const double edge_ratio = interior > 0.0 ? edge / interior : 0.0;
  if (edge_ratio > 1e-6) {
    spdlog::debug("assemble: edge/interior entry ratio {:.3e}", edge_ratio);
  }

  if (diagnostics != nullptr) {
    diagnostics->hermitian_deviation_before_symmetrization = dev;
    diagnostics->dropped_blocks = dropped;
    diagnostics->skipped_atoms = skipped_atoms;
    diagnostics->edge_to_interior_ratio = edge_ratio;
  }
  return symmetrize(raw);
}

DecayProfile decay_profile(const BlockOperator& v) {
  DecayProfile p;
  for (const auto& [key, blk] : v.blocks()) {
    const double w = bracket(key.first - key.second) * spectral_norm(blk);
    p.rows.push_back({key.first, key.second, w});
    p.d_emp = std::max(p.d_emp, w);
  }
  return p;
}

}  // namespace magflow

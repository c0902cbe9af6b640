#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "magflow/block_operator.hpp"

namespace testing {

using magflow::BlockOperator;
using magflow::cplx;
using magflow::Mat;

inline Mat random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
  }
  return m;
}

inline Mat random_hermitian(int dim, std::mt19937_64& rng) {
  const Mat a = random_matrix(dim, dim, rng);
  return 0.5 * (a + a.adjoint());
}

/// Hermitian operator with every block filled, scaled by `scale`.
inline BlockOperator random_hermitian_operator(int nb, int bd, double scale, std::mt19937_64& rng) {
  BlockOperator a(nb, bd, true);
  for (int n = 0; n < nb; ++n) {
    a.set_block(n, n, scale * random_hermitian(bd, rng));
    for (int m = n + 1; m < nb; ++m) {
      Mat b = scale * random_matrix(bd, bd, rng);
      a.set_block(m, n, b.adjoint());
      a.set_block(n, m, std::move(b));
    }
  }
  return a;
}

/// Hd with block n having spectrum inside [n + 1/2 - spread, n + 1/2 + spread].
inline BlockOperator gapped_diagonal(int nb, int bd, double spread, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-spread, spread);
  BlockOperator hd(nb, bd, true);
  for (int n = 0; n < nb; ++n) {
    Eigen::HouseholderQR<Mat> qr(random_matrix(bd, bd, rng));
    const Mat q = qr.householderQ();
    Eigen::VectorXd ev(bd);
    for (int i = 0; i < bd; ++i) ev(i) = n + 0.5 + u(rng);
    hd.set_block(n, n, q * ev.cast<cplx>().asDiagonal() * q.adjoint());
  }
  return hd;
}

/// Off-diagonal Hermitian coupling with block (n, m) scaled by scale * <n-m>^-decay.
inline BlockOperator random_coupling(int nb, int bd, double scale, double decay,
                                     std::mt19937_64& rng) {
  BlockOperator v(nb, bd, true);
  for (int n = 0; n < nb; ++n) {
    for (int m = n + 1; m < nb; ++m) {
      Mat b = scale * std::pow(magflow::bracket(n - m), -decay) * random_matrix(bd, bd, rng);
      v.set_block(m, n, b.adjoint());
      v.set_block(n, m, std::move(b));
    }
  }
  return v;
}

/// Fresh directory under the system temp path, unique per process and tag.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  const auto p = std::filesystem::temp_directory_path() /
                 ("magflow_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace testing

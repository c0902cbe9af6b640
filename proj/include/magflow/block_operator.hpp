#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <utility>

namespace magflow {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

using BlockKey = std::pair<int, int>;

/// Banded family of dense complex blocks P_n A P_m over a fixed complete family
/// of projections. All ranges share the same dimension; absent blocks are zero.
///
/// Blocks are kept in an ordered map so every traversal (norms, sums,
/// serialization) visits them in the same (n, m) order.
class BlockOperator {
 public:
  BlockOperator() = default;
  BlockOperator(int num_blocks, int block_dim, bool hermitian = false);

  static BlockOperator identity(int num_blocks, int block_dim);
  static BlockOperator zero_like(const BlockOperator& other);

  // Splits a dense (num_blocks*block_dim)^2 matrix into blocks. Blocks whose
  // largest entry is <= drop_below are not stored.
  static BlockOperator from_dense(const Mat& dense, int num_blocks, int block_dim,
                                  bool hermitian = false, double drop_below = 0.0);

  int num_blocks() const { return num_blocks_; }
  int block_dim() const { return block_dim_; }
  int dim() const { return num_blocks_ * block_dim_; }

  bool hermitian() const { return hermitian_; }
  void set_hermitian(bool flag) { hermitian_ = flag; }

  bool has_block(int n, int m) const;
  const Mat* find(int n, int m) const;
  // Copy of block (n, m); zero matrix if absent.
  Mat block(int n, int m) const;

  void set_block(int n, int m, Mat value);
  void add_to_block(int n, int m, const Mat& value);
  void erase_block(int n, int m);

  const std::map<BlockKey, Mat>& blocks() const { return blocks_; }
  std::size_t stored_blocks() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }

  Mat to_dense() const;

  // Largest entrywise deviation between block(m,n) and block(n,m)^dagger.
  double hermitian_deviation() const;

  BlockOperator& operator+=(const BlockOperator& other);
  BlockOperator& operator-=(const BlockOperator& other);
  BlockOperator& operator*=(cplx s);

  bool operator==(const BlockOperator& other) const;

 private:
  void check_index(int n, int m) const;
  void check_shape(const Mat& value) const;

  int num_blocks_ = 0;
  int block_dim_ = 0;
  bool hermitian_ = false;
  std::map<BlockKey, Mat> blocks_;
};

BlockOperator operator+(BlockOperator a, const BlockOperator& b);
BlockOperator operator-(BlockOperator a, const BlockOperator& b);
BlockOperator operator*(cplx s, BlockOperator a);

struct WeightedNormValue {
  int l = 0;
  double value = 0.0;
};

// <a> := max(1, |a|)
inline double bracket(int a) { return a == 0 ? 1.0 : static_cast<double>(a < 0 ? -a : a); }

/// 𝒟A: the (n, n) blocks of A.
BlockOperator diag_part(const BlockOperator& a);
/// 𝒪A = A - 𝒟A.
BlockOperator offdiag_part(const BlockOperator& a);

/// sup over stored (n, m) of <n-m>^l * sigma_max(block(n, m)).
WeightedNormValue weighted_norm(const BlockOperator& a, int l);

/// P_n AB P_m = sum_l (P_n A P_l)(P_l B P_m).
BlockOperator compose(const BlockOperator& a, const BlockOperator& b);
BlockOperator commutator(const BlockOperator& a, const BlockOperator& b);
BlockOperator adjoint(const BlockOperator& a);

/// (A + A^dagger)/2 with the Hermitian flag set.
BlockOperator symmetrize(const BlockOperator& a);

/// Restriction to rows/columns inside [0, levels) x [0, centers) of every
/// block; entries outside the window are zeroed (shape is unchanged).
BlockOperator restrict_window(const BlockOperator& a, int levels, int centers);

// Largest singular value.
double spectral_norm(const Mat& m);

/// Upper bound on the operator norm of the flattened operator from block norms:
/// sqrt(max row sum * max column sum) of the matrix of sigma_max values.
double schur_norm_bound(const BlockOperator& a);

/// Operator norm of the flattened operator (dense SVD).
double operator_norm(const BlockOperator& a);

// Constant K = 3 + 2 zeta(2) of the convolution estimate.
double convolution_constant();

}  // namespace magflow

#include "magflow/block_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "magflow/errors.hpp"

namespace magflow {

BlockOperator::BlockOperator(int num_blocks, int block_dim, bool hermitian)
    : num_blocks_(num_blocks), block_dim_(block_dim), hermitian_(hermitian) {
  if (num_blocks <= 0 || block_dim <= 0) {
    throw StructuralError("BlockOperator: num_blocks and block_dim must be positive");
  }
}

BlockOperator BlockOperator::identity(int num_blocks, int block_dim) {
  BlockOperator id(num_blocks, block_dim, true);
  for (int n = 0; n < num_blocks; ++n) {
    id.set_block(n, n, Mat::Identity(block_dim, block_dim));
  }
  return id;
}

BlockOperator BlockOperator::zero_like(const BlockOperator& other) {
  return BlockOperator(other.num_blocks(), other.block_dim(), other.hermitian());
}

BlockOperator BlockOperator::from_dense(const Mat& dense, int num_blocks, int block_dim,
                                        bool hermitian, double drop_below) {
  BlockOperator out(num_blocks, block_dim, hermitian);
  if (dense.rows() != out.dim() || dense.cols() != out.dim()) {
    throw StructuralError("from_dense: matrix shape does not match block layout");
  }
  for (int n = 0; n < num_blocks; ++n) {
    for (int m = 0; m < num_blocks; ++m) {
      Mat blk = dense.block(n * block_dim, m * block_dim, block_dim, block_dim);
      if (blk.cwiseAbs().maxCoeff() > drop_below) out.set_block(n, m, std::move(blk));
    }
  }
  return out;
}

void BlockOperator::check_index(int n, int m) const {
  if (n < 0 || m < 0 || n >= num_blocks_ || m >= num_blocks_) {
    throw StructuralError("block index (" + std::to_string(n) + "," + std::to_string(m) +
                          ") out of range");
  }
}

void BlockOperator::check_shape(const Mat& value) const {
  if (value.rows() != block_dim_ || value.cols() != block_dim_) {
    throw StructuralError("block has shape " + std::to_string(value.rows()) + "x" +
                          std::to_string(value.cols()) + ", expected " +
                          std::to_string(block_dim_));
  }
}

bool BlockOperator::has_block(int n, int m) const { return blocks_.count({n, m}) > 0; }

const Mat* BlockOperator::find(int n, int m) const {
  auto it = blocks_.find({n, m});
  return it == blocks_.end() ? nullptr : &it->second;
}

Mat BlockOperator::block(int n, int m) const {
  check_index(n, m);
  if (const Mat* p = find(n, m)) return *p;
  return Mat::Zero(block_dim_, block_dim_);
}

void BlockOperator::set_block(int n, int m, Mat value) {
  check_index(n, m);
  check_shape(value);
  blocks_[{n, m}] = std::move(value);
}

void BlockOperator::add_to_block(int n, int m, const Mat& value) {
  check_index(n, m);
  check_shape(value);
  auto it = blocks_.find({n, m});
  if (it == blocks_.end()) {
    blocks_.emplace(BlockKey{n, m}, value);
  } else {
    it->second += value;
  }
}

void BlockOperator::erase_block(int n, int m) { blocks_.erase({n, m}); }

Mat BlockOperator::to_dense() const {
  Mat out = Mat::Zero(dim(), dim());
  for (const auto& [key, blk] : blocks_) {
    out.block(key.first * block_dim_, key.second * block_dim_, block_dim_, block_dim_) = blk;
  }
  return out;
}

double BlockOperator::hermitian_deviation() const {
  double dev = 0.0;
  for (const auto& [key, blk] : blocks_) {
    const Mat* partner = find(key.second, key.first);
    const double d = partner == nullptr ? blk.cwiseAbs().maxCoeff()
                                        : (blk - partner->adjoint()).cwiseAbs().maxCoeff();
    dev = std::max(dev, d);
  }
  return dev;
}

BlockOperator& BlockOperator::operator+=(const BlockOperator& other) {
  if (other.num_blocks_ != num_blocks_ || other.block_dim_ != block_dim_) {
    throw StructuralError("operator+: shape mismatch");
  }
  for (const auto& [key, blk] : other.blocks_) add_to_block(key.first, key.second, blk);
  hermitian_ = hermitian_ && other.hermitian_;
  return *this;
}

BlockOperator& BlockOperator::operator-=(const BlockOperator& other) {
  if (other.num_blocks_ != num_blocks_ || other.block_dim_ != block_dim_) {
    throw StructuralError("operator-: shape mismatch");
  }
  for (const auto& [key, blk] : other.blocks_) add_to_block(key.first, key.second, -blk);
  hermitian_ = hermitian_ && other.hermitian_;
  return *this;
}

BlockOperator& BlockOperator::operator*=(cplx s) {
  for (auto& [key, blk] : blocks_) blk *= s;
  if (s.imag() != 0.0) hermitian_ = false;
  return *this;
}

bool BlockOperator::operator==(const BlockOperator& other) const {
  return num_blocks_ == other.num_blocks_ && block_dim_ == other.block_dim_ &&
         hermitian_ == other.hermitian_ && blocks_ == other.blocks_;
}

BlockOperator operator+(BlockOperator a, const BlockOperator& b) { return a += b; }
BlockOperator operator-(BlockOperator a, const BlockOperator& b) { return a -= b; }
BlockOperator operator*(cplx s, BlockOperator a) { return a *= s; }

BlockOperator diag_part(const BlockOperator& a) {
  BlockOperator out = BlockOperator::zero_like(a);
  for (const auto& [key, blk] : a.blocks()) {
    if (key.first == key.second) out.set_block(key.first, key.second, blk);
  }
  return out;
}

BlockOperator offdiag_part(const BlockOperator& a) {
  BlockOperator out = BlockOperator::zero_like(a);
  for (const auto& [key, blk] : a.blocks()) {
    if (key.first != key.second) out.set_block(key.first, key.second, blk);
  }
  return out;
}

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

WeightedNormValue weighted_norm(const BlockOperator& a, int l) {
  WeightedNormValue out{l, 0.0};
  for (const auto& [key, blk] : a.blocks()) {
    const double w = std::pow(bracket(key.first - key.second), l);
    out.value = std::max(out.value, w * spectral_norm(blk));
  }
  return out;
}

BlockOperator compose(const BlockOperator& a, const BlockOperator& b) {
  if (a.num_blocks() != b.num_blocks() || a.block_dim() != b.block_dim()) {
    throw StructuralError("compose: shape mismatch");
  }
  const int nb = a.num_blocks();
  std::vector<std::vector<std::pair<int, const Mat*>>> rows_of_b(nb);
  for (const auto& [key, blk] : b.blocks()) rows_of_b[key.first].push_back({key.second, &blk});

  BlockOperator out(nb, a.block_dim());
  Mat prod(a.block_dim(), a.block_dim());
  for (const auto& [key, ablk] : a.blocks()) {
    const int n = key.first;
    const int l = key.second;
    for (const auto& [m, bblk] : rows_of_b[l]) {
      prod.noalias() = ablk * (*bblk);
      out.add_to_block(n, m, prod);
    }
  }
  return out;
}

BlockOperator commutator(const BlockOperator& a, const BlockOperator& b) {
  return compose(a, b) - compose(b, a);
}

BlockOperator adjoint(const BlockOperator& a) {
  BlockOperator out = BlockOperator::zero_like(a);
  for (const auto& [key, blk] : a.blocks()) out.set_block(key.second, key.first, blk.adjoint());
  return out;
}

BlockOperator symmetrize(const BlockOperator& a) {
  BlockOperator out = a + adjoint(a);
  out *= 0.5;
  out.set_hermitian(true);
  return out;
}

BlockOperator restrict_window(const BlockOperator& a, int levels, int centers) {
  BlockOperator out = BlockOperator::zero_like(a);
  const int d = a.block_dim();
  const int c = std::clamp(centers, 0, d);
  for (const auto& [key, blk] : a.blocks()) {
    if (key.first >= levels || key.second >= levels) continue;
    Mat w = Mat::Zero(d, d);
    w.topLeftCorner(c, c) = blk.topLeftCorner(c, c);
    out.set_block(key.first, key.second, std::move(w));
  }
  return out;
}

double schur_norm_bound(const BlockOperator& a) {
  const int nb = a.num_blocks();
  std::vector<double> row(nb, 0.0);
  std::vector<double> col(nb, 0.0);
  for (const auto& [key, blk] : a.blocks()) {
    const double s = spectral_norm(blk);
    row[key.first] += s;
    col[key.second] += s;
  }
  const double r = *std::max_element(row.begin(), row.end());
  const double c = *std::max_element(col.begin(), col.end());
  return std::sqrt(r * c);
}

double operator_norm(const BlockOperator& a) {
  if (a.empty()) return 0.0;
  Eigen::BDCSVD<Mat> svd(a.to_dense());
  return svd.singularValues()(0);
}

double convolution_constant() { return 3.0 + std::numbers::pi * std::numbers::pi / 3.0; }

}  // namespace magflow

#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "magflow/audit.hpp"
#include "magflow/block_operator.hpp"
#include "magflow/errors.hpp"
#include "magflow/special.hpp"

using namespace magflow;
using testing::max_abs;

TEST_SUITE("blockop") {

TEST_CASE("diag and offdiag parts on simple operators") {
  BlockOperator a(3, 2);
  a.set_block(0, 1, Mat::Ones(2, 2));
  CHECK(diag_part(a).empty());
  CHECK(offdiag_part(a) == a);

  const BlockOperator id = BlockOperator::identity(3, 2);
  CHECK(diag_part(id) == id);
  CHECK(offdiag_part(id).empty());

  BlockOperator b = BlockOperator::identity(4, 1);
  b.set_block(0, 2, Mat::Constant(1, 1, 3.0));
  b.set_block(2, 0, Mat::Constant(1, 1, 3.0));
  const BlockOperator o = offdiag_part(b);
  CHECK(o.stored_blocks() == 2);
  CHECK(o.block(0, 2)(0, 0) == cplx(3.0));
  CHECK(o.block(2, 0)(0, 0) == cplx(3.0));
}

TEST_CASE("partition reassembles the operator exactly") {
  std::mt19937_64 rng(1);
  const BlockOperator a = testing::random_hermitian_operator(3, 3, 1.0, rng);
  CHECK((diag_part(a) + offdiag_part(a)).to_dense() == a.to_dense());
  CHECK(a.hermitian_deviation() <= 1e-13);
}

TEST_CASE("weighted norm examples") {
  const BlockOperator id = BlockOperator::identity(5, 3);
  for (int l = 0; l <= 3; ++l) CHECK(weighted_norm(id, l).value == doctest::Approx(1.0).epsilon(1e-14));
  BlockOperator a(5, 2);
  a.set_block(0, 3, 2.0 * Mat::Identity(2, 2));
  CHECK(weighted_norm(a, 1).value == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(weighted_norm(a, 0).value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(weighted_norm(BlockOperator(4, 2), 1).value == 0.0);
}

TEST_CASE("spectral norm by SVD agrees with the Gram eigenvalue") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat m = testing::random_matrix(1 + trial % 9, 1 + trial % 9, rng);
    const Mat gram = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
    CHECK(std::abs(spectral_norm(m) - std::sqrt(es.eigenvalues().maxCoeff())) <= 1e-10);
  }
}

TEST_CASE("compose matches the dense product") {
  std::mt19937_64 rng(3);
  const BlockOperator a = random_block_operator(5, 3, 1.0, 0.6, rng);
  const BlockOperator b = random_block_operator(5, 3, 2.0, 0.6, rng);
  CHECK(max_abs(compose(a, b).to_dense() - a.to_dense() * b.to_dense()) <= 1e-12);
  const BlockOperator c = random_block_operator(5, 3, 0.5, 0.8, rng);
  CHECK(max_abs(compose(compose(a, b), c).to_dense() - compose(a, compose(b, c)).to_dense()) <=
        1e-11);
  CHECK(max_abs(compose(BlockOperator::identity(5, 3), b).to_dense() - b.to_dense()) == 0.0);
}

TEST_CASE("commutator, adjoint and symmetrize") {
  std::mt19937_64 rng(4);
  const BlockOperator a = random_block_operator(4, 2, 1.0, 1.0, rng);
  const BlockOperator b = random_block_operator(4, 2, 1.0, 1.0, rng);
  CHECK(max_abs(commutator(a, a).to_dense()) <= 1e-13);
  CHECK(max_abs(commutator(BlockOperator::identity(4, 2), b).to_dense()) <= 1e-13);
  CHECK(adjoint(adjoint(a)).to_dense() == a.to_dense());
  CHECK(max_abs(adjoint(a).to_dense() - a.to_dense().adjoint()) == 0.0);
  const BlockOperator s = symmetrize(a);
  CHECK(s.hermitian());
  CHECK(s.hermitian_deviation() <= 1e-15);
  const BlockOperator aad = compose(a, adjoint(a));
  Eigen::SelfAdjointEigenSolver<Mat> es(aad.to_dense());
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("arithmetic keeps blocks and flags consistent") {
  std::mt19937_64 rng(5);
  BlockOperator a = testing::random_hermitian_operator(3, 2, 1.0, rng);
  const BlockOperator b = testing::random_hermitian_operator(3, 2, 1.0, rng);
  CHECK((a + b).hermitian());
  CHECK_FALSE((cplx(0.0, 1.0) * a).hermitian());
  CHECK(max_abs((a - a).to_dense()) == 0.0);
  a *= cplx(2.0);
  CHECK(a.hermitian());
}

TEST_CASE("restrict_window zeros rows and columns outside the window") {
  BlockOperator a(2, 4);
  a.set_block(0, 1, Mat::Ones(4, 4));
  const Mat r = restrict_window(a, 2, 2).block(0, 1);
  CHECK(r.block(0, 0, 2, 2) == Mat::Ones(2, 2));
  CHECK(max_abs(r.block(2, 0, 2, 4)) == 0.0);
  CHECK(max_abs(r.block(0, 2, 4, 2)) == 0.0);
  CHECK(restrict_window(a, 1, 4).empty());
}

TEST_CASE("Schur bound dominates the operator norm") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    const BlockOperator a = random_block_operator(6, 2, 1.0, 0.5, rng);
    CHECK(operator_norm(a) <= schur_norm_bound(a) * (1 + 1e-12));
    CHECK(weighted_norm(a, 0).value <= operator_norm(a) * (1 + 1e-12));
  }
}

TEST_CASE("shape and index errors") {
  BlockOperator a(3, 2);
  CHECK_THROWS_AS(a.set_block(0, 3, Mat::Zero(2, 2)), StructuralError);
  CHECK_THROWS_AS(a.set_block(0, 1, Mat::Zero(3, 2)), StructuralError);
  CHECK_THROWS_AS(compose(a, BlockOperator(3, 3)), StructuralError);
  CHECK_THROWS_AS(a + BlockOperator(2, 2), StructuralError);
  CHECK_THROWS_AS(BlockOperator(0, 2), StructuralError);
  CHECK_THROWS_AS(BlockOperator::from_dense(Mat::Zero(5, 5), 3, 2), StructuralError);
}

TEST_CASE("from_dense round trip") {
  std::mt19937_64 rng(7);
  const Mat d = testing::random_matrix(6, 6, rng);
  CHECK(BlockOperator::from_dense(d, 3, 2).to_dense() == d);
  Mat sparse = Mat::Zero(6, 6);
  sparse(0, 5) = 1e-20;
  CHECK(BlockOperator::from_dense(sparse, 3, 2, false, 1e-18).empty());
}

}  // TEST_SUITE blockop

TEST_SUITE("audit") {

TEST_CASE("convolution constant") {
  CHECK(convolution_constant() == doctest::Approx(3.0 + 2.0 * special::kZeta2).epsilon(1e-15));
}

TEST_CASE("scalar convolution estimate on a reduced range") {
  const ConvolutionAudit c = audit_convolution(60, 20000);
  CHECK(c.holds());
  CHECK(c.worst_ratio > 0.1);  // not vacuous
}

TEST_CASE("tail bound dominates the discarded terms") {
  const double direct = convolution_partial_sum(3, 7, 200000) - convolution_partial_sum(3, 7, 1000);
  CHECK(direct <= convolution_tail_bound(3, 7, 1000));
  CHECK_THROWS_AS(convolution_tail_bound(10, 3, 10), DomainError);
  CHECK_THROWS_AS(convolution_partial_sum(-1, 3, 10), DomainError);
}

TEST_CASE("product norm inequality on random operators") {
  const ProductNormAudit p = audit_product_norm(120, 99);
  CHECK(p.samples == 120);
  CHECK(p.holds());
}

TEST_CASE("digamma series identity") {
  const DigammaAudit d = audit_digamma(50, 200000);
  CHECK(d.worst_vs_digamma <= 1e-8);
  CHECK(d.worst_vs_harmonic <= 1e-8);
  CHECK(special::digamma(1.0) == doctest::Approx(-special::kEulerGamma).epsilon(1e-14));
  CHECK(special::digamma(0.5) ==
        doctest::Approx(-special::kEulerGamma - 2.0 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("compensated sum") {
  CHECK(special::compensated_sum({1e16, 1.0, -1e16}) == 1.0);
}

}  // TEST_SUITE audit

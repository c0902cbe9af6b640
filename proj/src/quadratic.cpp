#include "magflow/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "magflow/errors.hpp"
#include "magflow/flow.hpp"
#include "magflow/invariant.hpp"

namespace magflow {

namespace {

const cplx kI(0.0, 1.0);

// Lowering operator on a d-dimensional oscillator.
Eigen::MatrixXd lowering(int d) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) a(i - 1, i) = std::sqrt(static_cast<double>(i));
  return a;
}

Mat kron(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  Mat out = Mat::Zero(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (x(i, j) == 0.0) continue;
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = (x(i, j) * y).cast<cplx>();
    }
  }
  return out;
}

Eigen::VectorXd eigvals(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double off_level_interior(const Mat& m, const Truncation& trunc) {
  double worst = 0.0;
  for (int n = 0; n < trunc.interior_levels(); ++n) {
    for (int np = 0; np < trunc.interior_levels(); ++np) {
      if (n == np) continue;
      for (int k = 0; k < trunc.interior_centers(); ++k) {
        for (int kp = 0; kp < trunc.interior_centers(); ++kp) {
          worst = std::max(worst, std::abs(m(trunc.flat(n, k), trunc.flat(np, kp))));
        }
      }
    }
  }
  return worst;
}

}  // namespace

LadderRep build_ladder(const Truncation& trunc) {
  trunc.validate();
  const int nl = trunc.n_landau;
  const int nc = trunc.n_center;
  const Mat a = kron(lowering(nl), Eigen::MatrixXd::Identity(nc, nc));
  const Mat b = kron(Eigen::MatrixXd::Identity(nl, nl), lowering(nc));
  const double r2 = std::numbers::sqrt2;
  LadderRep rep;
  rep.trunc = trunc;
  rep.v1 = -kI * (a - a.adjoint()) / r2;
  rep.v2 = -(a + a.adjoint()) / r2;
  rep.c1 = (b + b.adjoint()) / r2;
  rep.c2 = kI * (b - b.adjoint()) / r2;
  rep.q1 = rep.c1 - rep.v2;
  rep.q2 = rep.c2 + rep.v1;
  rep.d1 = 0.5 * (rep.v1 - rep.c2);
  rep.d2 = 0.5 * (rep.v2 + rep.c1);
  return rep;
}

double interior_max_abs(const Mat& m, const Truncation& trunc) {
  const std::vector<int> idx = trunc.interior_indices();
  double worst = 0.0;
  for (int i : idx) {
    for (int j : idx) worst = std::max(worst, std::abs(m(i, j)));
  }
  return worst;
}

bool LinearCaseReport::passed(double tol) const {
  return identity1_residual <= tol && identity2_residual <= tol && blockdiag_residual <= tol &&
         invariant_residual <= tol;
}

bool DotCaseReport::passed(double tol) const {
  return identity1_residual <= tol && identity2_residual <= tol && invariant_residual <= tol;
}

LinearCaseReport check_linear_case(double e1, double e2, const Truncation& trunc) {
  if (std::hypot(e1, e2) > 1.0) throw DomainError("check_linear_case: need |E| <= 1");
  const LadderRep r = build_ladder(trunc);
  const int dim = trunc.dim();
  const Mat id = Mat::Identity(dim, dim);
  const Mat hla = landau_diagonal(trunc).to_dense();
  const Mat h = hla - e1 * r.q1 - e2 * r.q2;
  const Mat u0 = exp_antihermitian_dense(kI * (e1 * r.v1 + e2 * r.v2));

  LinearCaseReport rep;
  rep.e1 = e1;
  rep.e2 = e2;
  const Mat lhs1 = u0 * h * u0.adjoint();
  const Mat rhs1 = hla - e1 * r.c1 - e2 * r.c2 - 0.5 * (e1 * e1 + e2 * e2) * id;
  rep.identity1_residual = interior_max_abs(lhs1 - rhs1, trunc);
  rep.blockdiag_residual = off_level_interior(lhs1, trunc);

  // v + E^perp = (v1 - E2, v2 + E1)
  const Mat w1 = r.v1 - e2 * id;
  const Mat w2 = r.v2 + e1 * id;
  const Mat j = 0.5 * (w1 * w1 + w2 * w2);
  rep.identity2_residual = interior_max_abs(u0.adjoint() * hla * u0 - j, trunc);
  rep.invariant_residual = interior_max_abs(j * h - h * j, trunc);
  rep.spectrum_error = (eigvals(lhs1) - eigvals(h)).cwiseAbs().maxCoeff();
  return rep;
}

double dot_omega(double eps, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("dot case: sign must be +1 or -1");
  const double arg = 1.0 + 4.0 * sign * eps * eps;
  if (!(arg > 0.0)) {
    throw OmegaImaginary("1 + 4 sign eps^2 = " + std::to_string(arg) + " <= 0");
  }
  return std::sqrt(arg);
}

DotCaseReport check_dot_case(double eps, int sign, const Truncation& trunc) {
  const double omega = dot_omega(eps, sign);
  const LadderRep r = build_ladder(trunc);
  const Mat hla = landau_diagonal(trunc).to_dense();
  const Mat h = hla + sign * 0.5 * eps * eps * (r.q1 * r.q1 + r.q2 * r.q2);
  const Mat cv = r.c1 * r.v1 + r.c2 * r.v2;
  const Mat u = exp_antihermitian_dense(-kI * std::log(std::sqrt(omega)) * cv);

  DotCaseReport rep;
  rep.eps = eps;
  rep.sign = sign;
  rep.omega = omega;
  const Mat lhs1 = u * h * u.adjoint();
  const Mat rhs1 =
      0.5 * (1.0 + omega) * hla + 0.25 * (omega - 1.0) * (r.c1 * r.c1 + r.c2 * r.c2);
  rep.identity1_residual = interior_max_abs(lhs1 - rhs1, trunc);

  // D/sqrt(O) - sqrt(O) q^perp/2 with q^perp = (-q2, q1)
  const double s = std::sqrt(omega);
  const Mat x1 = r.d1 / s + 0.5 * s * r.q2;
  const Mat x2 = r.d2 / s - 0.5 * s * r.q1;
  const Mat j = 0.5 * (x1 * x1 + x2 * x2);
  const Mat conj = u.adjoint() * hla * u;
  rep.identity2_residual = interior_max_abs(conj - j, trunc);
  rep.invariant_residual = interior_max_abs(conj * h - h * conj, trunc);
  rep.spectrum_error = (eigvals(lhs1) - eigvals(h)).cwiseAbs().maxCoeff();
  return rep;
}

BlockOperator potential_operator_linear(double e1, double e2, const Truncation& trunc) {
  const LadderRep r = build_ladder(trunc);
  return symmetrize(BlockOperator::from_dense(-e1 * r.q1 - e2 * r.q2, trunc.n_landau,
                                              trunc.n_center, true));
}

BlockOperator potential_operator_quadratic(double eps, int sign, const Truncation& trunc) {
  if (sign != 1 && sign != -1) throw DomainError("dot case: sign must be +1 or -1");
  const LadderRep r = build_ladder(trunc);
  const Mat v = sign * 0.5 * eps * eps * (r.q1 * r.q1 + r.q2 * r.q2);
  return symmetrize(BlockOperator::from_dense(v, trunc.n_landau, trunc.n_center, true));
}

HamiltonianMatrix hamiltonian_matrix(const Eigen::Matrix2d& v2) {
  if ((v2 - v2.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw DomainError("hamiltonian_matrix: V'' must be symmetric");
  }
  Eigen::Matrix2d sigma_t;
  sigma_t << 0.0, -1.0, 1.0, 0.0;
  HamiltonianMatrix hm;
  hm.v2 = v2;
  hm.h.topLeftCorner<2, 2>() = 0.5 * sigma_t;
  hm.h.topRightCorner<2, 2>() = -Eigen::Matrix2d::Identity();
  hm.h.bottomLeftCorner<2, 2>() = 0.25 * Eigen::Matrix2d::Identity() + v2;
  hm.h.bottomRightCorner<2, 2>() = 0.5 * sigma_t;
  hm.p = 1.0 + v2.trace();
  hm.q = hm.p * hm.p - 4.0 * v2.determinant();
  return hm;
}

HamiltonianEigenReport hamiltonian_matrix_eigen(const Eigen::Matrix2d& v2, double match_tol) {
  HamiltonianEigenReport rep;
  rep.matrix = hamiltonian_matrix(v2);
  Eigen::EigenSolver<Eigen::Matrix4d> es(rep.matrix.h, false);
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
  // Round-off level parts are cleaned so that the sort and classification
  // are stable.
  for (auto& z : ev) {
    z = {std::abs(z.real()) < 1e-14 ? 0.0 : z.real(), std::abs(z.imag()) < 1e-14 ? 0.0 : z.imag()};
  }
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::copy(ev.begin(), ev.end(), rep.eigenvalues.begin());

  const cplx lam = kI * std::sqrt(cplx(rep.matrix.p + rep.matrix.q));
  const cplx mu = std::sqrt(cplx(rep.matrix.q - rep.matrix.p));
  const std::array<cplx, 4> f{lam, -lam, mu, -mu};
  rep.formula_matches = true;
  for (int i = 0; i < 4; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& z : ev) best = std::min(best, std::abs(z - f[i]));
    rep.formula[i] = {f[i], best, best <= match_tol};
    rep.formula_matches = rep.formula_matches && rep.formula[i].matched;
  }
  for (const auto& z : ev) {
    const bool re0 = std::abs(z.real()) <= 1e-12;
    const bool im0 = std::abs(z.imag()) <= 1e-12;
    if (re0 && im0) {
      ++rep.zero;
    } else if (re0) {
      ++rep.imaginary;
    } else if (im0) {
      ++rep.real;
    } else {
      ++rep.complex;
    }
  }
  return rep;
}

}  // namespace magflow

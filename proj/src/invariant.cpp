#include "magflow/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magflow/errors.hpp"

namespace magflow {

namespace {

Eigen::VectorXd eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double max_sorted_gap(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double window_norm(const BlockOperator& a, const Truncation& trunc) {
  return weighted_norm(restrict_window(a, trunc.interior_levels(), trunc.interior_centers()), 0)
      .value;
}

}  // namespace

BlockOperator landau_diagonal(const Truncation& trunc) {
  trunc.validate();
  BlockOperator h(trunc.n_landau, trunc.n_center, true);
  for (int n = 0; n < trunc.n_landau; ++n) {
    h.set_block(n, n, Mat::Identity(trunc.n_center, trunc.n_center) * (n + 0.5));
  }
  return h;
}

BlockOperator build_hamiltonian(const BlockOperator& v, const Truncation& trunc) {
  if (v.num_blocks() != trunc.n_landau || v.block_dim() != trunc.n_center) {
    throw StructuralError("build_hamiltonian: V shape does not match the truncation");
  }
  BlockOperator h = landau_diagonal(trunc);
  h += v;
  h.set_hermitian(true);
  return h;
}

InvariantResult construct_invariant(const BlockOperator& h, const Truncation& trunc,
                                    const IterateOptions& options) {
  if (h.num_blocks() != trunc.n_landau || h.block_dim() != trunc.n_center) {
    throw StructuralError("construct_invariant: H shape does not match the truncation");
  }
  IterateOptions opts = options;
  if (!opts.reference_diag) opts.reference_diag = landau_diagonal(trunc);
  FlowResult flow = iterate(h, opts);

  const BlockOperator hla = landau_diagonal(trunc);
  const Mat u = flow.unitary.to_dense();
  const Mat hd = h.to_dense();
  const Mat jd = u.adjoint() * hla.to_dense() * u;
  const int nb = trunc.n_landau;
  const int bd = trunc.n_center;

  InvariantResult out;
  out.j = symmetrize(BlockOperator::from_dense(jd, nb, bd));
  out.h_inf = flow.h_inf;
  out.u = flow.unitary;
  out.trace = std::move(flow.trace);

  InvariantReport& r = out.report;
  r.interior_levels = trunc.interior_levels();
  r.interior_centers = trunc.interior_centers();
  r.steps = static_cast<int>(out.trace.steps.size());
  r.initial_off_norm_1 = out.trace.initial_off_norm_1;
  r.final_off_norm_1 = out.trace.final_off_norm_1;

  const Mat jsym = out.j.to_dense();
  const BlockOperator comm = BlockOperator::from_dense(hd * jsym - jsym * hd, nb, bd);
  r.commutator_residual = window_norm(comm, trunc);
  r.commutator_residual_full = weighted_norm(comm, 0).value;
  r.blockdiag_residual = window_norm(offdiag_part(out.h_inf), trunc);
  r.spectrum_error = max_sorted_gap(eigenvalues(hd), eigenvalues(out.h_inf.to_dense()));
  r.j_spectrum_error = max_sorted_gap(eigenvalues(jsym), eigenvalues(hla.to_dense()));
  const Mat conj = u * hd * u.adjoint();
  r.conjugation_error =
      weighted_norm(BlockOperator::from_dense(conj, nb, bd) - out.h_inf, 0).value;
  const Mat defect = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
  r.unitarity_defect = weighted_norm(BlockOperator::from_dense(defect, nb, bd), 0).value;
  return out;
}

EvolutionTable evolve_expectations(const BlockOperator& h, const BlockOperator& j, const Vec& psi0,
                                   const std::vector<double>& times, const Truncation* window) {
  if (h.num_blocks() != j.num_blocks() || h.block_dim() != j.block_dim() ||
      psi0.size() != h.dim()) {
    throw StructuralError("evolve_expectations: shape mismatch");
  }
  const double nrm = psi0.norm();
  if (std::abs(nrm - 1.0) > 1e-10) {
    throw UnnormalizedState("evolve_expectations: ||psi0|| = " + std::to_string(nrm));
  }
  if (window != nullptr) {
    double outside = 0.0;
    for (int n = 0; n < window->n_landau; ++n) {
      for (int k = 0; k < window->n_center; ++k) {
        if (!window->in_interior(n, k)) outside += std::norm(psi0(window->flat(n, k)));
      }
    }
    if (std::sqrt(outside) > 1e-12) {
      throw DomainError("evolve_expectations: initial state has weight outside the interior");
    }
  }

  const int bd = h.block_dim();
  Eigen::VectorXd hla(h.dim());
  for (int i = 0; i < h.dim(); ++i) hla(i) = i / bd + 0.5;

  Eigen::SelfAdjointEigenSolver<Mat> es(h.to_dense());
  const Mat& vecs = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Vec c = vecs.adjoint() * psi0;
  const Mat jd = j.to_dense();

  EvolutionTable table;
  for (double t : times) {
    Vec ct(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) ct(i) = c(i) * std::polar(1.0, -lam(i) * t);
    const Vec psi = vecs * ct;
    EvolutionRow row;
    row.t = t;
    row.exp_j = psi.dot(jd * psi).real();
    row.exp_hla = (psi.cwiseAbs2().array() * hla.array()).sum();
    row.norm_defect = std::abs(psi.norm() - 1.0);
    table.rows.push_back(row);
  }
  if (!table.rows.empty()) {
    const double j0 = table.rows.front().exp_j;
    const double h0 = table.rows.front().exp_hla;
    for (const auto& row : table.rows) {
      table.drift_j = std::max(table.drift_j, std::abs(row.exp_j - j0) / std::abs(j0));
      table.drift_hla = std::max(table.drift_hla, std::abs(row.exp_hla - h0) / std::abs(h0));
    }
  }
  return table;
}

Vec landau_state(const Truncation& trunc, int n, int k) {
  if (n < 0 || n >= trunc.n_landau || k < 0 || k >= trunc.n_center) {
    throw DomainError("landau_state: index outside the truncation");
  }
  Vec v = Vec::Zero(trunc.dim());
  v(trunc.flat(n, k)) = 1.0;
  return v;
}

Vec level_superposition(const Truncation& trunc, const std::vector<int>& levels, int k) {
  if (levels.empty()) throw DomainError("level_superposition: no levels given");
  Vec v = Vec::Zero(trunc.dim());
  for (int n : levels) v += landau_state(trunc, n, k);
  return v / v.norm();
}

Vec gaussian_packet(const Truncation& trunc, double center, double spread, int level) {
  if (!(spread > 0.0)) throw DomainError("gaussian_packet: spread must be positive");
  if (level < 0 || level >= trunc.interior_levels()) {
    throw DomainError("gaussian_packet: level outside the interior window");
  }
  Vec v = Vec::Zero(trunc.dim());
  for (int k = 0; k < trunc.interior_centers(); ++k) {
    const double d = k - center;
    v(trunc.flat(level, k)) = std::exp(-d * d / (4.0 * spread * spread));
  }
  const double nrm = v.norm();
  if (!(nrm > 0.0)) throw DomainError("gaussian_packet: empty packet");
  return v / nrm;
}

Vec state_from_preset(const std::string& preset, const Truncation& trunc) {
  std::istringstream in(preset);
  std::string kind;
  in >> kind;
  auto fail = [&]() -> Vec { throw DomainError("unrecognized state preset '" + preset + "'"); };
  if (kind == "landau") {
    int n = 0;
    int k = 0;
    if (!(in >> n >> k)) return fail();
    return landau_state(trunc, n, k);
  }
  if (kind == "levels") {
    std::string list;
    int k = 0;
    if (!(in >> list >> k)) return fail();
    std::vector<int> levels;
    std::istringstream ls(list);
    std::string item;
    while (std::getline(ls, item, ',')) levels.push_back(std::stoi(item));
    return level_superposition(trunc, levels, k);
  }
  if (kind == "gaussian-packet") {
    double center = 0.0;
    double spread = 0.0;
    int level = 0;
    if (!(in >> center >> spread)) return fail();
    if (!(in >> level)) level = 0;
    return gaussian_packet(trunc, center, spread, level);
  }
  return fail();
}

std::vector<double> linspace_times(double t_max, int count) {
  if (count < 1) throw DomainError("linspace_times: count must be positive");
  std::vector<double> t(count, 0.0);
  for (int i = 1; i < count; ++i) t[i] = t_max * i / (count - 1);
  return t;
}

}  // namespace magflow

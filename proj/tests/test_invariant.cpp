#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "magflow/errors.hpp"
#include "magflow/invariant.hpp"
#include "magflow/potential.hpp"
#include "oracles.hpp"

using namespace magflow;
using testing::max_abs;

namespace {

const Truncation kSmall{6, 10, 2};

BlockOperator small_hamiltonian(double target_v1) {
  AndersonSpec s;
  s.grid_half_width = 3;
  BlockOperator v = assemble(anderson_mixture(s), kSmall);
  v *= cplx(target_v1 / weighted_norm(v, 1).value);
  return build_hamiltonian(v, kSmall);
}

}  // namespace

TEST_SUITE("invariant") {

TEST_CASE("free Hamiltonian") {
  const BlockOperator h = landau_diagonal(kSmall);
  const Eigen::VectorXd ev = oracle::eigvalsh(h.to_dense());
  for (int i = 0; i < ev.size(); ++i) CHECK(ev(i) == (i / kSmall.n_center) + 0.5);
  CHECK(gap_report(diag_part(h)).gamma_estimate == doctest::Approx(1.0));

  const InvariantResult r = construct_invariant(h, kSmall);
  CHECK(r.report.steps == 0);
  CHECK(r.j.to_dense() == h.to_dense());
  CHECK(r.report.commutator_residual == 0.0);
  CHECK(r.report.j_spectrum_error == 0.0);
}

TEST_CASE("two-level toy keeps the Landau spectrum in J") {
  const Truncation t{2, 1, 0};
  BlockOperator v(2, 1, true);
  v.set_block(0, 1, Mat::Constant(1, 1, 0.05));
  v.set_block(1, 0, Mat::Constant(1, 1, 0.05));
  const InvariantResult r = construct_invariant(build_hamiltonian(v, t), t);
  const Eigen::VectorXd ev = oracle::eigvalsh(r.j.to_dense());
  CHECK(ev(0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(ev(1) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(r.report.commutator_residual <= 1e-12);
}

TEST_CASE("Anderson instance: invariant, conjugation, spectra") {
  const BlockOperator h = small_hamiltonian(0.05);
  const double h_norm = weighted_norm(h, 0).value;
  IterateOptions opt;
  const InvariantResult r = construct_invariant(h, kSmall, opt);
  const InvariantReport& rep = r.report;
  CHECK(rep.steps >= 2);
  CHECK(rep.interior_levels == 4);
  CHECK(rep.interior_centers == 8);
  CHECK(rep.commutator_residual <= 10 * opt.tol * (1 + h_norm));
  CHECK(rep.commutator_residual <= rep.commutator_residual_full + 1e-18);
  CHECK(rep.blockdiag_residual <= opt.tol);
  CHECK(rep.spectrum_error <= 1e-9);
  CHECK(rep.j_spectrum_error <= 1e-10);
  CHECK(rep.conjugation_error <= 1e-9 * (1 + h_norm));
  CHECK(rep.unitarity_defect <= rep.steps * 1e-11);
  CHECK(r.j.hermitian_deviation() <= 1e-13);
}

TEST_CASE("time evolution conserves J but not H_La") {
  const BlockOperator h = small_hamiltonian(0.05);
  const InvariantResult r = construct_invariant(h, kSmall);
  const Vec psi0 = level_superposition(kSmall, {1, 2, 3}, 4);
  const auto times = linspace_times(100.0, 50);
  const EvolutionTable tab = evolve_expectations(h, r.j, psi0, times, &kSmall);
  REQUIRE(tab.rows.size() == 50);
  CHECK(tab.rows.front().t == 0.0);
  CHECK(tab.rows.back().t == 100.0);
  CHECK(tab.rows.front().exp_hla == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(tab.rows.front().exp_j == doctest::Approx(psi0.dot(r.j.to_dense() * psi0).real()));
  for (const auto& row : tab.rows) CHECK(row.norm_defect <= 1e-12);
  CHECK(tab.drift_j <= 1e-8);
  CHECK(tab.drift_hla >= 10 * tab.drift_j);

  // Ehrenfest: |<J>_t - <J>_0| <= t ||[H, J]||
  const Mat hd = h.to_dense();
  const Mat jd = r.j.to_dense();
  const double comm = (hd * jd - jd * hd).jacobiSvd().singularValues()(0);
  for (int i : {10, 20, 30, 40, 49}) {
    const auto& row = tab.rows[static_cast<std::size_t>(i)];
    CHECK(std::abs(row.exp_j - tab.rows.front().exp_j) <= row.t * comm + 1e-12);
  }
}

TEST_CASE("stationary state without potential") {
  const BlockOperator h = landau_diagonal(kSmall);
  const Vec psi0 = landau_state(kSmall, 2, 3);
  const EvolutionTable tab = evolve_expectations(h, h, psi0, {0.0, 1.0, 50.0});
  for (const auto& row : tab.rows) {
    CHECK(row.exp_j == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(row.exp_hla == doctest::Approx(2.5).epsilon(1e-14));
  }
  CHECK(tab.drift_j <= 1e-14);
}

TEST_CASE("evolution preconditions") {
  const BlockOperator h = landau_diagonal(kSmall);
  CHECK_THROWS_AS(evolve_expectations(h, h, 2.0 * landau_state(kSmall, 0, 0), {0.0}),
                  UnnormalizedState);
  CHECK_THROWS_AS(evolve_expectations(h, h, landau_state(kSmall, 5, 0), {0.0}, &kSmall),
                  DomainError);
  CHECK_THROWS_AS(evolve_expectations(h, h, Vec::Zero(3), {0.0}), StructuralError);
}

TEST_CASE("state presets") {
  const Vec a = state_from_preset("landau 1 2", kSmall);
  CHECK(a(kSmall.flat(1, 2)) == cplx(1.0));
  const Vec b = state_from_preset("levels 1,2,3 4", kSmall);
  CHECK(b.norm() == doctest::Approx(1.0));
  CHECK(std::abs(b(kSmall.flat(2, 4)) - 1.0 / std::sqrt(3.0)) <= 1e-15);
  const Vec c = state_from_preset("gaussian-packet 3 1.5", kSmall);
  CHECK(c.norm() == doctest::Approx(1.0));
  CHECK(std::abs(c(kSmall.flat(0, 3))) > std::abs(c(kSmall.flat(0, 0))));
  CHECK(std::abs(c(kSmall.flat(0, 9))) == 0.0);
  const Vec d = gaussian_packet(kSmall, 2.0, 1.0, 1);
  CHECK(std::abs(d(kSmall.flat(1, 2))) > 0.0);
  CHECK_THROWS_AS(state_from_preset("bogus", kSmall), DomainError);
  CHECK_THROWS_AS(state_from_preset("landau 9 0", kSmall), DomainError);
  CHECK_THROWS_AS(gaussian_packet(kSmall, 2.0, 0.0), DomainError);
  const auto ts = linspace_times(10.0, 3);
  CHECK(ts == std::vector<double>{0.0, 5.0, 10.0});
  CHECK_THROWS_AS(linspace_times(1.0, 0), DomainError);
}

TEST_CASE("shape mismatch") {
  CHECK_THROWS_AS(build_hamiltonian(BlockOperator(3, 3), kSmall), StructuralError);
  CHECK_THROWS_AS(construct_invariant(BlockOperator(3, 3), kSmall), StructuralError);
}

}  // TEST_SUITE invariant

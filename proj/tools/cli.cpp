#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <filesystem>
#include <ostream>

#include "magflow/audit.hpp"
#include "magflow/errors.hpp"
#include "magflow/flow.hpp"
#include "magflow/invariant.hpp"
#include "magflow/io.hpp"
#include "magflow/quadratic.hpp"

namespace magflow::cli {

using nlohmann::json;

namespace {

void row(std::ostream& out, const std::string& key, const std::string& value) {
  out << fmt::format("{:<28} {}\n", key, value);
}
void row(std::ostream& out, const std::string& key, double value) {
  row(out, key, fmt::format("{:.6e}", value));
}

// Records named checks; the first failure decides the exit message.
class Checks {
 public:
  void expect(const std::string& name, double value, double limit, bool upper = true) {
    const bool ok = upper ? value <= limit : value >= limit;
    if (!ok && failed_.empty()) {
      failed_ = fmt::format("{} ({:.6e} {} {:.6e})", name, value, upper ? ">" : "<", limit);
    }
  }
  bool ok() const { return failed_.empty(); }
  const std::string& first_failure() const { return failed_; }

 private:
  std::string failed_;
};

std::string outpath(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

}  // namespace

void RunConfig::validate() const {
  truncation.validate();
  for (double t : {gamma, iterate_tol, verify_tol, evolution_tol}) {
    if (!(t > 0.0)) throw DomainError("gamma and tolerances must be positive");
  }
  if (max_steps < 1) throw DomainError("max_steps must be positive");
  if (target_v1 && !(*target_v1 > 0.0)) throw DomainError("target_v1 must be positive");
  if (potential_kind != "anderson" && potential_kind != "mixture" && potential_kind != "linear" &&
      potential_kind != "quadratic" && potential_kind != "zero") {
    throw DomainError("unknown potential kind '" + potential_kind + "'");
  }
  if (potential_kind == "mixture" && mixture_file.empty()) {
    throw DomainError("potential kind 'mixture' needs a file");
  }
  if (evolve && times.empty() && (time_steps < 1 || !(t_max >= 0.0))) {
    throw DomainError("evolution needs steps >= 1 and t_max >= 0");
  }
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    if (j.contains("truncation")) {
      const auto& t = j["truncation"];
      c.truncation.n_landau = t.value("n_landau", c.truncation.n_landau);
      c.truncation.n_center = t.value("n_center", c.truncation.n_center);
      c.truncation.interior_margin = t.value("interior_margin", c.truncation.interior_margin);
    }
    if (j.contains("potential")) {
      const auto& p = j["potential"];
      c.potential_kind = p.value("kind", c.potential_kind);
      c.mixture_file = p.value("file", c.mixture_file);
      c.anderson.grid_half_width = p.value("grid_half_width", c.anderson.grid_half_width);
      if (p.contains("amplitude")) {
        const auto a = p["amplitude"].get<std::vector<double>>();
        if (a.size() != 2) throw DomainError("potential.amplitude needs two values");
        c.anderson.amplitude_low = a[0];
        c.anderson.amplitude_high = a[1];
      }
      c.anderson.seed = p.value("seed", c.anderson.seed);
      if (p.contains("E")) {
        const auto e = p["E"].get<std::vector<double>>();
        if (e.size() != 2) throw DomainError("potential.E needs two values");
        c.e1 = e[0];
        c.e2 = e[1];
      }
      c.eps = p.value("eps", c.eps);
      c.sign = p.value("sign", c.sign);
    }
    if (j.contains("seed")) c.anderson.seed = j["seed"].get<std::uint64_t>();
    c.coupling_scale = j.value("coupling_scale", c.coupling_scale);
    if (j.contains("target_v1") && !j["target_v1"].is_null()) {
      c.target_v1 = j["target_v1"].get<double>();
    }
    c.gamma = j.value("gamma", c.gamma);
    c.iterate_tol = j.value("iterate_tol", c.iterate_tol);
    c.verify_tol = j.value("verify_tol", c.verify_tol);
    c.evolution_tol = j.value("evolution_tol", c.evolution_tol);
    c.max_steps = j.value("max_steps", c.max_steps);
    if (j.contains("evolution")) {
      const auto& e = j["evolution"];
      c.evolve = e.value("enabled", c.evolve);
      c.t_max = e.value("t_max", c.t_max);
      c.time_steps = e.value("steps", c.time_steps);
      if (e.contains("times")) c.times = e["times"].get<std::vector<double>>();
      c.state = e.value("state", c.state);
    }
    c.output_dir = j.value("output_dir", c.output_dir);
    c.threads = j.value("threads", c.threads);
    c.timestamp = j.value("timestamp", c.timestamp);
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  return c;
}

json to_json(const RunConfig& c) {
  json j = {
      {"truncation", io::to_json(c.truncation)},
      {"potential",
       {{"kind", c.potential_kind},
        {"file", c.mixture_file},
        {"grid_half_width", c.anderson.grid_half_width},
        {"amplitude", {c.anderson.amplitude_low, c.anderson.amplitude_high}},
        {"seed", c.anderson.seed},
        {"E", {c.e1, c.e2}},
        {"eps", c.eps},
        {"sign", c.sign}}},
      {"coupling_scale", c.coupling_scale},
      {"target_v1", c.target_v1 ? json(*c.target_v1) : json(nullptr)},
      {"gamma", c.gamma},
      {"iterate_tol", c.iterate_tol},
      {"verify_tol", c.verify_tol},
      {"evolution_tol", c.evolution_tol},
      {"max_steps", c.max_steps},
      {"evolution",
       {{"enabled", c.evolve},
        {"t_max", c.t_max},
        {"steps", c.time_steps},
        {"times", c.times},
        {"state", c.state}}},
      {"output_dir", c.output_dir},
      {"threads", c.threads},
  };
  return j;
}

int cmd_gen_potential(const GenPotentialArgs& args, std::ostream& out, std::ostream& err) {
  if (args.anderson.has_value() == args.single.has_value()) {
    err << "gen-potential: give exactly one of --anderson-width or --single-atom\n";
    return kUsage;
  }
  GaussianMixture mix;
  try {
    mix = args.anderson ? anderson_mixture(*args.anderson) : GaussianMixture{{*args.single}};
  } catch (const DomainError& e) {
    err << "gen-potential: " << e.what() << "\n";
    return kUsage;
  }
  // The mixture file carries no timestamp: same flags give the same bytes.
  const std::string text = io::to_json(mix).dump(2) + "\n";
  if (args.out.empty()) {
    out << text;  // stdout carries only the mixture so it can be piped
  } else {
    io::write_file(args.out, text);
    row(out, "atoms", std::to_string(mix.atoms.size()));
    row(out, "total_variation", mix.total_variation());
  }
  if (!args.raster.empty()) {
    io::write_file(args.raster,
                   io::raster_csv(potential_raster(mix, args.raster_lo, args.raster_hi,
                                                   args.raster_points),
                                  args.timestamp));
    if (!args.out.empty()) row(out, "raster", args.raster);
  }
  return kOk;
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
  } catch (const DomainError& e) {
    err << "run: " << e.what() << "\n";
    return kUsage;
  }
  const Truncation& trunc = config.truncation;

  // 1. Potential.
  BlockOperator v(trunc.n_landau, trunc.n_center, true);
  GaussianMixture mix;
  bool is_mixture = false;
  if (config.potential_kind == "anderson") {
    mix = anderson_mixture(config.anderson);
    is_mixture = true;
  } else if (config.potential_kind == "mixture") {
    mix = io::mixture_from_json(json::parse(io::read_file(config.mixture_file)));
    is_mixture = true;
  }
  AssemblyDiagnostics diag;
  if (is_mixture) {
    v = assemble(mix, trunc, AssemblyOptions{1e-14, config.threads}, &diag);
  } else if (config.potential_kind == "linear") {
    v = potential_operator_linear(config.e1, config.e2, trunc);
  } else if (config.potential_kind == "quadratic") {
    try {
      dot_omega(config.eps, config.sign);
    } catch (const OmegaImaginary& e) {
      err << "run: " << e.what() << "\n";
      return kOmegaImaginary;
    }
    v = potential_operator_quadratic(config.eps, config.sign, trunc);
  }

  const double raw_v1 = weighted_norm(v, 1).value;
  double scale = config.coupling_scale;
  if (config.target_v1 && raw_v1 > 0.0) scale = *config.target_v1 / raw_v1;
  if (scale != 1.0) v *= cplx(scale);
  v.set_hermitian(true);
  const double v1 = weighted_norm(v, 1).value;
  if (v1 > config.gamma / 8.0) {
    err << fmt::format("WARN: ||V||_1 = {:.6e} exceeds gamma/8 = {:.6e}\n", v1,
                       config.gamma / 8.0);
  }

  // 2. Flow and invariant.
  const BlockOperator h = build_hamiltonian(v, trunc);
  IterateOptions opts;
  opts.gamma = config.gamma;
  opts.tol = config.iterate_tol;
  opts.max_steps = config.max_steps;
  InvariantResult res;
  try {
    res = construct_invariant(h, trunc, opts);
  } catch (const GapViolation& e) {
    err << "run: " << e.what() << "\n";
    return kGapViolation;
  } catch (const MaxStepsExceeded& e) {
    err << "FAILED: convergence (no tolerance reached after " << e.trace().steps.size()
        << " steps)\n";
    return kAssertionFailed;
  } catch (const std::runtime_error& e) {
    err << "FAILED: " << e.what() << "\n";
    return kAssertionFailed;
  }

  // 3. Evolution.
  EvolutionTable evo;
  if (config.evolve) {
    const std::vector<double> times =
        config.times.empty() ? linspace_times(config.t_max, config.time_steps) : config.times;
    try {
      const Vec psi0 = state_from_preset(config.state, trunc);
      evo = evolve_expectations(h, res.j, psi0, times, &trunc);
    } catch (const std::exception& e) {
      err << "run: initial state: " << e.what() << "\n";
      return kUsage;
    }
    res.report.evolution_drift_j = evo.drift_j;
    res.report.evolution_drift_hla = evo.drift_hla;
  }

  // 4. Outputs.
  const DecayProfile profile = decay_profile(v);
  std::filesystem::create_directories(config.output_dir);
  io::write_file(outpath(config.output_dir, "trace.csv"),
                 io::trace_csv(res.trace, config.timestamp));
  io::write_file(outpath(config.output_dir, "decay_profile.csv"),
                 io::decay_profile_csv(profile, config.timestamp));
  if (config.evolve) {
    io::write_file(outpath(config.output_dir, "evolution.csv"),
                   io::evolution_csv(evo, config.timestamp));
  }
  json report = io::to_json(res.report);
  report["config"] = to_json(config);
  report["v_norm_1"] = v1;
  report["coupling_scale_effective"] = scale;
  report["d_emp"] = profile.d_emp;
  if (is_mixture) {
    report["total_variation"] = mix.total_variation() * std::abs(scale);
    report["assembly"] = {{"hermitian_deviation", diag.hermitian_deviation_before_symmetrization},
                          {"dropped_blocks", diag.dropped_blocks},
                          {"skipped_atoms", diag.skipped_atoms},
                          {"edge_to_interior_ratio", diag.edge_to_interior_ratio}};
  }
  report["trace"] = io::to_json(res.trace);
  io::write_file(outpath(config.output_dir, "invariant.json"), io::dump(report, config.timestamp));

  // 5. Assertions.
  const double h0 = weighted_norm(h, 0).value;
  Checks checks;
  for (const auto& s : res.trace.steps) {
    checks.expect("psi_bound_slack", s.psi_bound_slack, -1e-10, false);
    checks.expect("spectrum_preservation_step", s.spectrum_error, 1e-9 * (1.0 + h0));
  }
  checks.expect("final_off_norm_1", res.report.final_off_norm_1, config.iterate_tol);
  checks.expect("commutator_residual", res.report.commutator_residual, config.verify_tol);
  checks.expect("spectrum_error", res.report.spectrum_error, 1e-9 * (1.0 + h0));
  checks.expect("j_spectrum_error", res.report.j_spectrum_error, 1e-10 * (1.0 + h0));
  checks.expect("conjugation_error", res.report.conjugation_error, 1e-9 * (1.0 + h0));
  if (config.evolve) {
    checks.expect("evolution_drift_J", evo.drift_j, config.evolution_tol);
    double defect = 0.0;
    for (const auto& r : evo.rows) defect = std::max(defect, r.norm_defect);
    checks.expect("norm_conservation", defect, 1e-12);
  }
  if (is_mixture && !mix.atoms.empty()) {
    const double c8 = audit_bounds(std::max(40, trunc.n_landau)).c8;
    checks.expect("decay_bound", profile.d_emp,
                  mix.total_variation() * std::abs(scale) * c8 * (1.0 + 1e-12));
  }

  row(out, "potential", config.potential_kind);
  row(out, "||V||_1", v1);
  row(out, "steps", std::to_string(res.report.steps));
  for (const auto& s : res.trace.steps) {
    row(out, fmt::format("  step {} ||O H||_1", s.step), s.off_norm_1);
  }
  row(out, "final ||O H||_1", res.report.final_off_norm_1);
  row(out, "doubling exponent",
      doubling_exponent(res.trace.off_norm_sequence(), 4));
  row(out, "commutator_residual", res.report.commutator_residual);
  row(out, "spectrum_error", res.report.spectrum_error);
  row(out, "j_spectrum_error", res.report.j_spectrum_error);
  row(out, "conjugation_error", res.report.conjugation_error);
  if (config.evolve) {
    row(out, "evolution_drift_J", evo.drift_j);
    row(out, "evolution_drift_HLa", evo.drift_hla);
  }
  row(out, "d_emp", profile.d_emp);
  row(out, "status", checks.ok() ? "PASS" : "FAIL");
  if (!checks.ok()) {
    err << "FAILED: " << checks.first_failure() << "\n";
    return kAssertionFailed;
  }
  return kOk;
}

int cmd_quadratic(const QuadraticArgs& args, std::ostream& out, std::ostream& err) {
  if (!args.linear && !args.dot && !args.hmatrix) {
    err << "quadratic: give at least one of --linear, --dot, --hmatrix\n";
    return kUsage;
  }
  try {
    args.truncation.validate();
  } catch (const DomainError& e) {
    err << "quadratic: " << e.what() << "\n";
    return kUsage;
  }
  json report = json::object();
  Checks checks;
  try {
    if (args.linear) {
      const auto r = check_linear_case(args.linear->first, args.linear->second, args.truncation);
      report["linear"] = io::to_json(r);
      row(out, "linear identity1", r.identity1_residual);
      row(out, "linear identity2", r.identity2_residual);
      row(out, "linear blockdiag", r.blockdiag_residual);
      row(out, "linear invariant", r.invariant_residual);
      checks.expect("linear.identity1", r.identity1_residual, args.tol);
      checks.expect("linear.identity2", r.identity2_residual, args.tol);
      checks.expect("linear.blockdiag", r.blockdiag_residual, args.tol);
      checks.expect("linear.invariant", r.invariant_residual, args.tol);
    }
    if (args.dot) {
      const auto r = check_dot_case(args.dot->first, args.dot->second, args.truncation);
      report["dot"] = io::to_json(r);
      row(out, "dot omega", fmt::format("{:.12f}", r.omega));
      row(out, "dot identity1", r.identity1_residual);
      row(out, "dot identity2", r.identity2_residual);
      row(out, "dot invariant", r.invariant_residual);
      checks.expect("dot.identity1", r.identity1_residual, args.tol);
      checks.expect("dot.identity2", r.identity2_residual, args.tol);
      checks.expect("dot.invariant", r.invariant_residual, args.tol);
    }
  } catch (const OmegaImaginary& e) {
    err << "quadratic: Omega is imaginary: " << e.what() << "\n";
    return kOmegaImaginary;
  } catch (const DomainError& e) {
    err << "quadratic: " << e.what() << "\n";
    return kUsage;
  }
  if (args.hmatrix) {
    const auto& h = *args.hmatrix;
    Eigen::Matrix2d v2;
    v2 << h[0], h[1], h[2], h[3];
    HamiltonianEigenReport r;
    try {
      r = hamiltonian_matrix_eigen(v2);
    } catch (const DomainError& e) {
      err << "quadratic: " << e.what() << "\n";
      return kUsage;
    }
    report["hmatrix"] = io::to_json(r);
    for (int i = 0; i < 4; ++i) {
      row(out, fmt::format("eigenvalue {}", i),
          fmt::format("{:+.12f} {:+.12f}i", r.eigenvalues[i].real(), r.eigenvalues[i].imag()));
    }
    for (int i = 0; i < 4; ++i) {
      const auto& f = r.formula[i];
      row(out, fmt::format("formula value {}", i),
          fmt::format("{:+.12f} {:+.12f}i  {}", f.formula.real(), f.formula.imag(),
                      f.matched ? "matches" : "no match"));
    }
  }
  if (!args.out.empty()) io::write_file(args.out, io::dump(report, args.timestamp));
  row(out, "status", checks.ok() ? "PASS" : "FAIL");
  if (!checks.ok()) {
    err << "FAILED: " << checks.first_failure() << "\n";
    return kAssertionFailed;
  }
  return kOk;
}

int cmd_audit(const AuditArgs& args, std::ostream& out, std::ostream& err) {
  BoundAudit base;
  BoundAudit full;
  try {
    base = audit_bounds(std::min(100, args.n_max));
    full = audit_bounds(args.n_max);
  } catch (const DomainError& e) {
    err << "audit: " << e.what() << "\n";
    return kUsage;
  }
  const ConvolutionAudit conv = audit_convolution(args.conv_n, args.conv_j);
  const ProductNormAudit prod = audit_product_norm(args.samples, args.seed);
  const DigammaAudit dig = audit_digamma(args.digamma_x, args.digamma_terms);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  const bool stable =
      rel(full.c6, base.c6) <= 1e-12 && rel(full.c7, base.c7) <= 1e-12 &&
      rel(full.c8, base.c8) <= 1e-12;

  json report = {{"bounds", io::to_json(full)},
                 {"bounds_n100", io::to_json(base)},
                 {"stable_past_100", stable},
                 {"convolution",
                  {{"n_max", conv.n_max},
                   {"j_max", conv.j_max},
                   {"K", convolution_constant()},
                   {"worst_ratio", conv.worst_ratio},
                   {"worst_pair", {conv.worst_n, conv.worst_m}},
                   {"holds", conv.holds()}}},
                 {"product_norm",
                  {{"samples", prod.samples},
                   {"worst_ratio", prod.worst_ratio},
                   {"holds", prod.holds()}}},
                 {"digamma",
                  {{"x_max", dig.x_max},
                   {"terms", dig.terms},
                   {"worst_vs_digamma", dig.worst_vs_digamma},
                   {"worst_vs_harmonic", dig.worst_vs_harmonic}}}};
  if (!args.out.empty()) io::write_file(args.out, io::dump(report, args.timestamp));

  row(out, "c6", full.c6);
  row(out, "c6 (quadratic exponent)", full.c6_quadratic_exponent);
  row(out, "c7", full.c7);
  row(out, "c8", full.c8);
  row(out, "central binomial max", full.central_binomial_max);
  row(out, "stable past n_max=100", stable ? "yes" : "no");
  row(out, "convolution worst ratio", conv.worst_ratio);
  row(out, "product norm worst ratio", prod.worst_ratio);
  row(out, "digamma worst error", dig.worst_vs_digamma);

  Checks checks;
  checks.expect("bounds_finite", full.finite() ? 0.0 : 1.0, 0.0);
  checks.expect("central_binomial", full.central_binomial_max, 1.0);
  checks.expect("convolution", conv.worst_ratio, 1.0);
  checks.expect("product_norm", prod.worst_ratio, 1.0);
  checks.expect("digamma", dig.worst_vs_digamma, 1e-8);
  row(out, "status", checks.ok() ? "PASS" : "FAIL");
  if (!checks.ok()) {
    err << "FAILED: " << checks.first_failure() << "\n";
    return kAssertionFailed;
  }
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Block diagonalization of Landau Hamiltonians with Gaussian-mixture potentials"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  bool no_timestamp = false;
  std::string log_level = "warn";
  app.add_option("--threads", threads, "Worker cap (0: hardware concurrency)");
  app.add_flag("--no-timestamp", no_timestamp, "Omit timestamp headers from outputs");
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off");

  // gen-potential
  auto* gen = app.add_subcommand("gen-potential", "Write a Gaussian-mixture potential file");
  std::optional<int> width;
  std::vector<double> amp{-1.0, 1.0};
  std::uint64_t seed = 7;
  std::vector<double> single;
  GenPotentialArgs gargs;
  gen->add_option("--anderson-width", width, "Anderson grid half width w (sites in [-w,w]^2)");
  gen->add_option("--amp", amp, "Weight range LOW HIGH")->expected(2);
  gen->add_option("--seed", seed, "PRNG seed");
  gen->add_option("--single-atom", single, "Y1 Y2 W")->expected(3);
  gen->add_option("--out", gargs.out, "Mixture JSON path (default: stdout)");
  gen->add_option("--raster", gargs.raster, "Potential raster CSV path");
  std::vector<double> raster_range;
  gen->add_option("--raster-range", raster_range, "Raster square LO HI")->expected(2);
  gen->add_option("--raster-points", gargs.raster_points, "Raster points per axis");

  // run
  auto* runc = app.add_subcommand("run", "Full pipeline: assemble, iterate, verify, evolve");
  std::string config_path;
  std::optional<int> n_landau, n_center, margin, max_steps, time_steps, anderson_width;
  std::optional<double> coupling, target, gamma, iterate_tol, verify_tol, evolution_tol, t_max;
  std::optional<std::string> mixture, state, out_dir;
  std::optional<std::uint64_t> rseed;
  std::vector<double> ramp, rlinear, rdot, rtimes;
  bool zero = false;
  bool no_evolution = false;
  runc->add_option("--config", config_path, "JSON config file");
  runc->add_option("--n-landau", n_landau);
  runc->add_option("--n-center", n_center);
  runc->add_option("--margin", margin, "Interior margin");
  runc->add_option("--mixture", mixture, "Mixture JSON file");
  runc->add_option("--anderson-width", anderson_width);
  runc->add_option("--amp", ramp)->expected(2);
  runc->add_option("--seed", rseed);
  runc->add_option("--linear", rlinear, "E1 E2")->expected(2);
  runc->add_option("--dot", rdot, "EPS SIGN")->expected(2);
  runc->add_flag("--zero-potential", zero);
  runc->add_option("--coupling-scale", coupling);
  runc->add_option("--target-v1", target, "Rescale V so that ||V||_1 equals this");
  runc->add_option("--gamma", gamma);
  runc->add_option("--iterate-tol", iterate_tol);
  runc->add_option("--verify-tol", verify_tol);
  runc->add_option("--evolution-tol", evolution_tol);
  runc->add_option("--max-steps", max_steps);
  runc->add_option("--t-max", t_max);
  runc->add_option("--time-steps", time_steps);
  runc->add_option("--times", rtimes);
  runc->add_option("--state", state, "landau N K | levels N1,N2 K | gaussian-packet C S [N]");
  runc->add_flag("--no-evolution", no_evolution);
  runc->add_option("--out", out_dir, "Output directory");

  // quadratic
  auto* quad = app.add_subcommand("quadratic", "Closed-form quadratic-potential checks");
  QuadraticArgs qargs;
  std::vector<double> qlinear, qdot, qh;
  quad->add_option("--linear", qlinear, "E1 E2")->expected(2);
  quad->add_option("--dot", qdot, "EPS SIGN")->expected(2);
  quad->add_option("--hmatrix", qh, "V'' entries a b c d (row-major)")->expected(4);
  quad->add_option("--n-landau", qargs.truncation.n_landau);
  quad->add_option("--n-center", qargs.truncation.n_center);
  quad->add_option("--margin", qargs.truncation.interior_margin);
  quad->add_option("--tol", qargs.tol);
  quad->add_option("--out", qargs.out, "Report JSON path");

  // audit
  auto* aud = app.add_subcommand("audit", "Norm and special-function bound audits");
  AuditArgs aargs;
  aud->add_option("--n-max", aargs.n_max);
  aud->add_option("--conv-n", aargs.conv_n);
  aud->add_option("--conv-j", aargs.conv_j);
  aud->add_option("--samples", aargs.samples);
  aud->add_option("--seed", aargs.seed);
  aud->add_option("--digamma-x", aargs.digamma_x);
  aud->add_option("--digamma-terms", aargs.digamma_terms);
  aud->add_option("--out", aargs.out, "audit.json path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kUsage;
  }

  static const bool logger_ready = [] {
    spdlog::set_default_logger(spdlog::stderr_logger_mt("magflow"));
    return true;
  }();
  (void)logger_ready;
  spdlog::set_level(spdlog::level::from_str(log_level));
  const bool stamp = !no_timestamp;

  try {
    if (*gen) {
      if (width) gargs.anderson = AndersonSpec{*width, amp[0], amp[1], seed};
      if (!single.empty()) gargs.single = Atom{single[2], single[0], single[1]};
      if (!raster_range.empty()) {
        gargs.raster_lo = raster_range[0];
        gargs.raster_hi = raster_range[1];
      }
      gargs.timestamp = stamp;
      return cmd_gen_potential(gargs, out, err);
    }
    if (*runc) {
      RunConfig c;
      if (!config_path.empty()) c = config_from_json(json::parse(io::read_file(config_path)));
      if (n_landau) c.truncation.n_landau = *n_landau;
      if (n_center) c.truncation.n_center = *n_center;
      if (margin) c.truncation.interior_margin = *margin;
      if (mixture) {
        c.potential_kind = "mixture";
        c.mixture_file = *mixture;
      }
      if (anderson_width) {
        c.potential_kind = "anderson";
        c.anderson.grid_half_width = *anderson_width;
      }
      if (!ramp.empty()) {
        c.anderson.amplitude_low = ramp[0];
        c.anderson.amplitude_high = ramp[1];
      }
      if (rseed) c.anderson.seed = *rseed;
      if (!rlinear.empty()) {
        c.potential_kind = "linear";
        c.e1 = rlinear[0];
        c.e2 = rlinear[1];
      }
      if (!rdot.empty()) {
        c.potential_kind = "quadratic";
        c.eps = rdot[0];
        c.sign = rdot[1] < 0 ? -1 : 1;
      }
      if (zero) c.potential_kind = "zero";
      if (coupling) c.coupling_scale = *coupling;
      if (target) c.target_v1 = *target;
      if (gamma) c.gamma = *gamma;
      if (iterate_tol) c.iterate_tol = *iterate_tol;
      if (verify_tol) c.verify_tol = *verify_tol;
      if (evolution_tol) c.evolution_tol = *evolution_tol;
      if (max_steps) c.max_steps = *max_steps;
      if (t_max) c.t_max = *t_max;
      if (time_steps) c.time_steps = *time_steps;
      if (!rtimes.empty()) c.times = rtimes;
      if (state) c.state = *state;
      if (no_evolution) c.evolve = false;
      if (out_dir) c.output_dir = *out_dir;
      if (threads > 0) c.threads = threads;
      if (no_timestamp) c.timestamp = false;
      return cmd_run(c, out, err);
    }
    if (*quad) {
      if (!qlinear.empty()) qargs.linear = std::make_pair(qlinear[0], qlinear[1]);
      if (!qdot.empty()) {
        if (qdot[1] != 1.0 && qdot[1] != -1.0) {
          err << "quadratic: --dot SIGN must be +1 or -1\n";
          return kUsage;
        }
        qargs.dot = std::make_pair(qdot[0], static_cast<int>(qdot[1]));
      }
      if (!qh.empty()) qargs.hmatrix = qh;
      qargs.timestamp = stamp;
      return cmd_quadratic(qargs, out, err);
    }
    if (*aud) {
      aargs.timestamp = stamp;
      return cmd_audit(aargs, out, err);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kAssertionFailed;
  }
  return kUsage;
}

}  // namespace magflow::cli

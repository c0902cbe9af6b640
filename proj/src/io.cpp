#include "magflow/io.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "magflow/errors.hpp"

namespace magflow::io {

namespace {

// Shortest representation that parses back to the same double.
std::string num(double x) { return fmt::format("{}", x); }

void maybe_stamp(std::string& out, bool timestamp) {
  if (timestamp) out += timestamp_line() + "\n";
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json to_json(const BlockOperator& a) {
  json blocks = json::array();
  for (const auto& [key, blk] : a.blocks()) {
    std::vector<double> re;
    std::vector<double> im;
    re.reserve(blk.size());
    im.reserve(blk.size());
    for (Eigen::Index i = 0; i < blk.rows(); ++i) {
      for (Eigen::Index j = 0; j < blk.cols(); ++j) {
        re.push_back(blk(i, j).real());
        im.push_back(blk(i, j).imag());
      }
    }
    blocks.push_back({{"n", key.first}, {"m", key.second}, {"re", re}, {"im", im}});
  }
  return {{"num_blocks", a.num_blocks()},
          {"block_dim", a.block_dim()},
          {"hermitian", a.hermitian()},
          {"blocks", blocks}};
}

BlockOperator block_operator_from_json(const json& j) {
  try {
    const int nb = j.at("num_blocks").get<int>();
    const int bd = j.at("block_dim").get<int>();
    BlockOperator a(nb, bd, j.value("hermitian", false));
    for (const auto& b : j.at("blocks")) {
      const auto re = b.at("re").get<std::vector<double>>();
      const auto im = b.at("im").get<std::vector<double>>();
      if (re.size() != static_cast<std::size_t>(bd) * bd || im.size() != re.size()) {
        throw StructuralError("block has wrong number of entries");
      }
      Mat m(bd, bd);
      for (int r = 0; r < bd; ++r) {
        for (int c = 0; c < bd; ++c) m(r, c) = cplx(re[r * bd + c], im[r * bd + c]);
      }
      a.set_block(b.at("n").get<int>(), b.at("m").get<int>(), std::move(m));
    }
    return a;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("block operator JSON: ") + e.what());
  }
}

json to_json(const GaussianMixture& mix) {
  json atoms = json::array();
  for (const auto& a : mix.atoms) atoms.push_back({{"w", a.w}, {"y", {a.y1, a.y2}}});
  return {{"atoms", atoms}};
}

GaussianMixture mixture_from_json(const json& j) {
  try {
    GaussianMixture mix;
    for (const auto& a : j.at("atoms")) {
      const auto y = a.at("y").get<std::vector<double>>();
      if (y.size() != 2) throw StructuralError("mixture JSON: y must have two entries");
      mix.atoms.push_back({a.at("w").get<double>(), y[0], y[1]});
    }
    return mix;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("mixture JSON: ") + e.what());
  }
}

json to_json(const Truncation& t) {
  return {{"n_landau", t.n_landau},
          {"n_center", t.n_center},
          {"interior_margin", t.interior_margin}};
}

json to_json(const InvariantReport& r) {
  return {
      {"interior_window",
       {{"levels", {0, r.interior_levels}}, {"centers", {0, r.interior_centers}}}},
      {"steps", r.steps},
      {"initial_off_norm_1", r.initial_off_norm_1},
      {"final_off_norm_1", r.final_off_norm_1},
      {"commutator_residual", r.commutator_residual},
      {"commutator_residual_full", r.commutator_residual_full},
      {"blockdiag_residual", r.blockdiag_residual},
      {"spectrum_error", r.spectrum_error},
      {"j_spectrum_error", r.j_spectrum_error},
      {"conjugation_error", r.conjugation_error},
      {"unitarity_defect", r.unitarity_defect},
      {"evolution_drift_J", r.evolution_drift_j < 0 ? json(nullptr) : json(r.evolution_drift_j)},
      {"evolution_drift_HLa",
       r.evolution_drift_hla < 0 ? json(nullptr) : json(r.evolution_drift_hla)},
  };
}

json to_json(const BoundAudit& a) {
  return {{"n_max", a.n_max},
          {"c6", a.c6},
          {"c6_quadratic_exponent", a.c6_quadratic_exponent},
          {"c7", a.c7},
          {"c8", a.c8},
          {"c8_argmax", {{"n", a.c8_n}, {"m", a.c8_m}, {"l", a.c8_l}}},
          {"central_binomial_max", a.central_binomial_max},
          {"finite", a.finite()}};
}

json to_json(const LinearCaseReport& r) {
  return {{"E", {r.e1, r.e2}},
          {"identity1_residual", r.identity1_residual},
          {"identity2_residual", r.identity2_residual},
          {"blockdiag_residual", r.blockdiag_residual},
          {"invariant_residual", r.invariant_residual},
          {"spectrum_error", r.spectrum_error}};
}

json to_json(const DotCaseReport& r) {
  return {{"eps", r.eps},
          {"sign", r.sign},
          {"omega", r.omega},
          {"identity1_residual", r.identity1_residual},
          {"identity2_residual", r.identity2_residual},
          {"invariant_residual", r.invariant_residual},
          {"spectrum_error", r.spectrum_error}};
}

json to_json(const HamiltonianEigenReport& r) {
  auto cz = [](std::complex<double> z) { return json::array({z.real(), z.imag()}); };
  json ev = json::array();
  for (const auto& z : r.eigenvalues) ev.push_back(cz(z));
  json formula = json::array();
  for (const auto& f : r.formula) {
    formula.push_back({{"value", cz(f.formula)}, {"distance", f.distance}, {"matched", f.matched}});
  }
  json hm = json::array();
  for (int i = 0; i < 4; ++i) {
    hm.push_back({r.matrix.h(i, 0), r.matrix.h(i, 1), r.matrix.h(i, 2), r.matrix.h(i, 3)});
  }
  return {{"V2", {{r.matrix.v2(0, 0), r.matrix.v2(0, 1)}, {r.matrix.v2(1, 0), r.matrix.v2(1, 1)}}},
          {"H", hm},
          {"P", r.matrix.p},
          {"Q", r.matrix.q},
          {"eigenvalues", ev},
          {"formula", formula},
          {"formula_matches", r.formula_matches},
          {"pattern",
           {{"imaginary", r.imaginary}, {"real", r.real}, {"zero", r.zero}, {"complex", r.complex}}}};
}

json to_json(const IterationTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    steps.push_back({{"step", s.step},
                     {"off_norm_1", s.off_norm_1},
                     {"w_norm", s.w_norm},
                     {"gap_gamma", finite_or_null(s.gap_gamma)},
                     {"min_gap_ratio", finite_or_null(s.min_gap_ratio)},
                     {"cross_check_error", s.cross_check_error},
                     {"lemma_holds", s.lemma.holds()}});
  }
  return {{"initial_off_norm_1", t.initial_off_norm_1},
          {"final_off_norm_1", t.final_off_norm_1},
          {"steps", steps}};
}

Vec state_from_json(const json& j) {
  if (!j.is_array() || j.size() % 2 != 0) {
    throw StructuralError("state JSON must be an array of interleaved re, im values");
  }
  Vec v(static_cast<Eigen::Index>(j.size() / 2));
  for (std::size_t i = 0; i < j.size() / 2; ++i) {
    v(static_cast<Eigen::Index>(i)) = cplx(j[2 * i].get<double>(), j[2 * i + 1].get<double>());
  }
  return v;
}

std::string timestamp_line() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return fmt::format("# generated {:%Y-%m-%dT%H:%M:%SZ}", now);
}

std::string trace_csv(const IterationTrace& trace, bool timestamp) {
  std::string out;
  maybe_stamp(out, timestamp);
  out += "step,off_norm_1,diag_drift,w_norm,w_norm_2,psi_bound_slack,spectrum_error\n";
  for (const auto& s : trace.steps) {
    out += fmt::format("{},{},{},{},{},{},{}\n", s.step, num(s.off_norm_1), num(s.diag_drift),
                       num(s.w_norm), num(s.w_norm_2), num(s.psi_bound_slack),
                       num(s.spectrum_error));
  }
  return out;
}

std::string evolution_csv(const EvolutionTable& table, bool timestamp) {
  std::string out;
  maybe_stamp(out, timestamp);
  out += "t,exp_J,exp_HLa,norm_defect\n";
  for (const auto& r : table.rows) {
    out += fmt::format("{},{},{},{}\n", num(r.t), num(r.exp_j), num(r.exp_hla),
                       num(r.norm_defect));
  }
  return out;
}

std::string decay_profile_csv(const DecayProfile& profile, bool timestamp) {
  std::string out;
  maybe_stamp(out, timestamp);
  out += "n,m,weighted_norm\n";
  for (const auto& r : profile.rows) {
    out += fmt::format("{},{},{}\n", r.n, r.m, num(r.weighted_norm));
  }
  return out;
}

std::string raster_csv(const std::vector<std::array<double, 3>>& rows, bool timestamp) {
  std::string out;
  maybe_stamp(out, timestamp);
  out += "q1,q2,V\n";
  for (const auto& r : rows) out += fmt::format("{},{},{}\n", num(r[0]), num(r[1]), num(r[2]));
  return out;
}

std::string dump(json j, bool timestamp) {
  if (timestamp && j.is_object()) j["generated"] = timestamp_line().substr(12);
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace magflow::io

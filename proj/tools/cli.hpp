#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "magflow/landau.hpp"
#include "magflow/potential.hpp"

namespace magflow::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kAssertionFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kGapViolation = 3;
inline constexpr int kOmegaImaginary = 4;

/// Full pipeline configuration. JSON layout (every key optional):
///   {
///     "truncation": {"n_landau": 12, "n_center": 24, "interior_margin": 4},
///     "potential": {"kind": "anderson" | "mixture" | "linear" | "quadratic" | "zero",
///                   "file": "mix.json", "grid_half_width": 10,
///                   "amplitude": [-1, 1], "seed": 7, "E": [e1, e2],
///                   "eps": 0.1, "sign": 1},
///     "coupling_scale": 1.0, "target_v1": 0.06,
///     "gamma": 1.0, "iterate_tol": 1e-12, "verify_tol": 1e-8,
///     "evolution_tol": 1e-7, "max_steps": 30,
///     "evolution": {"enabled": true, "t_max": 100, "steps": 50,
///                   "times": [..], "state": "levels 1,2,3 8"},
///     "output_dir": "out", "threads": 0, "timestamp": true
///   }
struct RunConfig {
  Truncation truncation;
  std::string potential_kind = "anderson";
  std::string mixture_file;
  AndersonSpec anderson;
  double e1 = 0.0;
  double e2 = 0.0;
  double eps = 0.1;
  int sign = 1;
  double coupling_scale = 1.0;
  std::optional<double> target_v1;
  double gamma = 1.0;
  double iterate_tol = 1e-12;
  double verify_tol = 1e-8;
  double evolution_tol = 1e-7;
  int max_steps = 30;
  bool evolve = true;
  double t_max = 100.0;
  int time_steps = 50;
  std::vector<double> times;
  std::string state = "levels 1,2,3 8";
  std::string output_dir = "out";
  int threads = 0;
  bool timestamp = true;

  void validate() const;  // throws DomainError
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);

struct GenPotentialArgs {
  std::optional<AndersonSpec> anderson;
  std::optional<Atom> single;
  std::string out;  // empty: stdout
  std::string raster;
  double raster_lo = -12.0;
  double raster_hi = 12.0;
  int raster_points = 97;
  bool timestamp = true;
};

struct QuadraticArgs {
  std::optional<std::pair<double, double>> linear;
  std::optional<std::pair<double, int>> dot;
  std::optional<std::vector<double>> hmatrix;  // V'' row-major, 4 entries
  Truncation truncation{24, 24, 11};
  double tol = 1e-6;
  std::string out;
  bool timestamp = true;
};

struct AuditArgs {
  int n_max = 200;
  int conv_n = 200;
  long conv_j = 100000;
  int samples = 100;
  unsigned long long seed = 11;
  int digamma_x = 50;
  long digamma_terms = 1000000;
  std::string out;  // audit.json path; empty: stdout only
  bool timestamp = true;
};

int cmd_gen_potential(const GenPotentialArgs& args, std::ostream& out, std::ostream& err);
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_quadratic(const QuadraticArgs& args, std::ostream& out, std::ostream& err);
int cmd_audit(const AuditArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv (argv[0] is the program name) and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace magflow::cli

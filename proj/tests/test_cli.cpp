#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "helpers.hpp"
#include "magflow/io.hpp"

using namespace magflow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "magflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> small_run(const fs::path& dir) {
  return {"run",         "--n-landau",   "6",   "--n-center", "10",         "--margin",
          "2",           "--anderson-width", "3", "--target-v1", "0.05",     "--t-max",
          "20",          "--time-steps", "10",  "--state",    "levels 1,2,3 4", "--out",
          dir.string(),  "--no-timestamp"};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors") {
  CHECK(invoke({}).code == cli::kUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kUsage);
  CHECK(invoke({"run", "--n-landau", "abc"}).code == cli::kUsage);
  CHECK(invoke({"--help"}).code == cli::kOk);
  CHECK(invoke({"gen-potential"}).code == cli::kUsage);
  CHECK(invoke({"run", "--n-landau", "1", "--no-evolution"}).code == cli::kUsage);
}

TEST_CASE("gen-potential is reproducible") {
  const fs::path dir = testing::scratch_dir("gen");
  const std::string a = (dir / "a.json").string();
  const std::string b = (dir / "b.json").string();
  const std::vector<std::string> base{"gen-potential", "--anderson-width", "10", "--amp",
                                      "-0.02",         "0.02",             "--seed", "7"};
  auto with_out = [&](const std::string& p) {
    auto v = base;
    v.push_back("--out");
    v.push_back(p);
    return v;
  };
  REQUIRE(invoke(with_out(a)).code == cli::kOk);
  REQUIRE(invoke(with_out(b)).code == cli::kOk);
  CHECK(io::read_file(a) == io::read_file(b));
  const GaussianMixture mix = io::mixture_from_json(io::json::parse(io::read_file(a)));
  CHECK(mix.atoms.size() == 441);
  for (const auto& atom : mix.atoms) CHECK(std::abs(atom.w) <= 0.02);

  const Outcome single = invoke({"gen-potential", "--single-atom", "0", "0", "1.0"});
  REQUIRE(single.code == cli::kOk);
  const GaussianMixture one = io::mixture_from_json(io::json::parse(single.out));
  REQUIRE(one.atoms.size() == 1);
  CHECK(one.atoms[0].w == 1.0);
  CHECK(one.atoms[0].y1 == 0.0);

  const std::string raster = (dir / "r.csv").string();
  REQUIRE(invoke({"gen-potential", "--single-atom", "0", "0", "1.0", "--raster", raster,
                  "--raster-points", "5", "--no-timestamp"})
              .code == cli::kOk);
  CHECK(io::read_file(raster).rfind("q1,q2,V\n", 0) == 0);
}

TEST_CASE("run writes every artifact and is deterministic") {
  const fs::path d = testing::scratch_dir("run");
  const char* files[] = {"trace.csv", "invariant.json", "evolution.csv", "decay_profile.csv"};
  const Outcome r1 = invoke(small_run(d));
  INFO(r1.err);
  REQUIRE(r1.code == cli::kOk);
  std::vector<std::string> first;
  for (const char* f : files) {
    CHECK(fs::exists(d / f));
    first.push_back(io::read_file((d / f).string()));
  }
  REQUIRE(invoke(small_run(d)).code == cli::kOk);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(io::read_file((d / files[i]).string()) == first[i]);
  }
  CHECK(r1.out.find("PASS") != std::string::npos);
  const io::json rep = io::json::parse(first[1]);
  CHECK(rep["commutator_residual"].get<double>() <= 1e-8);
  CHECK(rep["v_norm_1"].get<double>() == doctest::Approx(0.05));
  CHECK_FALSE(rep.contains("generated"));
  CHECK(first[2].rfind("t,exp_J,exp_HLa,norm_defect\n", 0) == 0);
}

TEST_CASE("run with threads flag gives the same bytes") {
  const fs::path d = testing::scratch_dir("thr");
  auto a = small_run(d);
  a.insert(a.begin(), {"--threads", "1"});
  REQUIRE(invoke(a).code == cli::kOk);
  const std::string one = io::read_file((d / "invariant.json").string());
  auto b = small_run(d);
  b.insert(b.begin(), {"--threads", "3"});
  REQUIRE(invoke(b).code == cli::kOk);
  const std::string three = io::read_file((d / "invariant.json").string());
  // the recorded config differs only in the thread cap
  io::json ja = io::json::parse(one);
  io::json jb = io::json::parse(three);
  ja["config"].erase("threads");
  jb["config"].erase("threads");
  CHECK(ja == jb);
}

TEST_CASE("run with zero potential is trivial") {
  const fs::path d = testing::scratch_dir("zero");
  const Outcome r = invoke({"run", "--zero-potential", "--n-landau", "4", "--n-center", "6",
                            "--margin", "1", "--state", "landau 1 2", "--out", d.string(),
                            "--no-timestamp"});
  INFO(r.err);
  CHECK(r.code == cli::kOk);
  const io::json rep = io::json::parse(io::read_file((d / "invariant.json").string()));
  CHECK(rep["steps"] == 0);
  CHECK(rep["commutator_residual"].get<double>() == 0.0);
}

TEST_CASE("strong coupling prints a warning") {
  const fs::path d = testing::scratch_dir("warn");
  auto args = small_run(d);
  args[10] = "0.5";  // --target-v1 value
  const Outcome r = invoke(args);
  CHECK(r.err.find("WARN") != std::string::npos);
  CHECK(r.out.find("WARN") == std::string::npos);
  CHECK((r.code == cli::kOk || r.code == cli::kAssertionFailed || r.code == cli::kGapViolation));
}

TEST_CASE("run from a JSON config") {
  const fs::path d = testing::scratch_dir("cfg");
  cli::RunConfig c;
  c.truncation = {5, 8, 2};
  c.potential_kind = "linear";
  c.e1 = 0.02;
  c.evolve = false;
  c.output_dir = d.string();
  c.timestamp = false;
  const cli::RunConfig back = cli::config_from_json(cli::to_json(c));
  CHECK(back.truncation.n_center == 8);
  CHECK(back.potential_kind == "linear");
  CHECK(back.e1 == 0.02);
  CHECK_FALSE(back.evolve);
  CHECK(cli::to_json(back) == cli::to_json(c));

  const std::string cfg = (d / "config.json").string();
  io::write_file(cfg, cli::to_json(c).dump());
  const Outcome r = invoke({"run", "--config", cfg, "--no-timestamp"});
  INFO(r.err);
  CHECK(r.code == cli::kOk);
  CHECK(fs::exists(d / "trace.csv"));
  CHECK_FALSE(fs::exists(d / "evolution.csv"));
}

TEST_CASE("quadratic subcommand") {
  const Outcome dot = invoke({"quadratic", "--dot", "0.1", "+1"});
  INFO(dot.err);
  CHECK(dot.code == cli::kOk);
  CHECK(invoke({"quadratic", "--dot", "0.1", "-1"}).code == cli::kOk);
  CHECK(invoke({"quadratic", "--linear", "0", "0"}).code == cli::kOk);
  CHECK(invoke({"quadratic", "--linear", "0.3", "0"}).code == cli::kOk);
  CHECK(invoke({"quadratic", "--dot", "0.6", "-1"}).code == cli::kOmegaImaginary);
  CHECK(invoke({"quadratic", "--dot", "0.1", "2"}).code == cli::kUsage);

  const fs::path d = testing::scratch_dir("quad");
  const std::string path = (d / "h.json").string();
  const Outcome h = invoke({"quadratic", "--hmatrix", "0", "0", "0", "0", "--out", path});
  CHECK(h.code == cli::kOk);
  CHECK(h.out.find("eigen") != std::string::npos);
  const io::json rep = io::json::parse(io::read_file(path));
  CHECK(rep.dump().find("eigenvalues") != std::string::npos);
}

TEST_CASE("audit subcommand") {
  const fs::path d = testing::scratch_dir("audit");
  const std::string path = (d / "audit.json").string();
  const Outcome r = invoke({"audit", "--n-max", "120", "--conv-n", "30", "--conv-j", "10000",
                            "--samples", "20", "--digamma-terms", "100000", "--out", path,
                            "--no-timestamp"});
  INFO(r.err);
  CHECK(r.code == cli::kOk);
  const io::json rep = io::json::parse(io::read_file(path));
  CHECK_FALSE(rep.empty());
  CHECK_FALSE(rep.contains("generated"));
}

}  // TEST_SUITE cli

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "nlmc/io.hpp"
#include "nlmc/rng.hpp"

using namespace nlmc;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
  fs::path p = fs::temp_directory_path() / "nlmc_cli_tests";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  fs::path out = scratch_dir() / ("out" + std::to_string(counter) + ".txt");
  fs::path err = scratch_dir() / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  std::string cmd = env_prefix + NLMC_CLI_PATH + " " + args + " > " + out.string() +
                    " 2> " + err.string();
  int rc = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

const char* kDiskSpec = R"({"type":"ball","params":{"center":[0,0],"radius":1}})";
const char* kExpSpec = R"({"type":"exponential","params":{"lambda":1},"beta":1.5})";

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("kernel specs round trip through JSON") {
  Kernel f = kernel_from_json(Json::parse(
      R"({"type":"fractional","params":{"alpha":0.5},"beta":1.8,"dim":2})"));
  CHECK(f.beta() == 1.8);
  CHECK(f.dim() == 2);
  CHECK(f.j(0.5) == doctest::Approx(std::pow(0.5, -2.5)));

  Kernel t = kernel_from_json(Json::parse(
      R"({"type":"truncated_constant","params":{"c":2,"r0":1.5},"beta":1})"));
  CHECK(t.j(1.0) == 2.0);
  CHECK(t.j(1.6) == 0.0);

  Kernel s = kernel_from_json(Json::parse(
      R"({"type":"step_geometric","params":{"a":1,"q":0.5,"b":1,"g":0.5},"beta":1})"));
  CHECK(s.j(0.75) == 1.0);

  Kernel e = kernel_from_json(Json::parse(R"({"type":"exponential","beta":1})"));
  CHECK(e.j(1.0) == doctest::Approx(std::exp(-1.0)));  // lambda defaults to 1

  Kernel tab = kernel_from_json(Json::parse(
      R"({"type":"table","params":{"r":[0.1,1,10],"j":[100,1,0.01]},"beta":1})"));
  CHECK(tab.j(0.05) == 100.0);

  CHECK_THROWS_AS(kernel_from_json(Json::parse(R"({"type":"gaussian","beta":1})")),
                  std::invalid_argument);
  CHECK_THROWS(kernel_from_json(Json::parse(R"({"type":"fractional","beta":1})")));
  CHECK_THROWS_AS(kernel_from_json(Json::parse("[1,2,3]")), std::invalid_argument);
}

TEST_CASE("shape specs round trip through JSON") {
  Shape ball = shape_from_json(Json::parse(kDiskSpec));
  CHECK(ball.dim() == 2);
  CHECK(ball.volume() == doctest::Approx(kPi));

  Shape poly = shape_from_json(Json::parse(
      R"({"type":"polygon","params":{"vertices":[[0,0],[1,0],[1,1],[0,1]]}})"));
  CHECK(poly.volume() == doctest::Approx(1.0));

  Shape el = shape_from_json(Json::parse(
      R"({"type":"ellipse","params":{"a":0.2,"b":0.1}})"));
  CHECK(el.volume() == doctest::Approx(0.02 * kPi));

  Shape fc = shape_from_json(Json::parse(
      R"({"type":"fourier_curve","params":{"c0":1,"a":[0.3]}})"));
  CHECK(fc.volume() == doctest::Approx(kPi * 1.045));

  Shape lim = shape_from_json(Json::parse(
      R"({"type":"limacon","params":{"base":1,"dent":0.3}})"));
  CHECK(lim.volume() == doctest::Approx(kPi * 1.045));

  Shape e3 = shape_from_json(Json::parse(
      R"({"type":"ellipsoid","params":{"semi_axes":[1,0.7,0.4]}})"));
  CHECK(e3.dim() == 3);

  Shape ps = shape_from_json(Json::parse(
      R"({"type":"perturbed_sphere","params":{"r0":1,"eps":0.1,"l":2,"m":1}})"));
  CHECK(ps.dim() == 3);

  CHECK_THROWS_AS(shape_from_json(Json::parse(R"({"type":"torus"})")), std::invalid_argument);
  CHECK_THROWS(shape_from_json(Json::parse(R"({"type":"ball","params":{}})")));
}

TEST_CASE("inline JSON and file arguments both load") {
  Json inline_spec = load_json_arg(R"(  {"type":"ball","params":{"radius":1}} )");
  CHECK(inline_spec.at("type") == "ball");

  fs::path f = scratch_dir() / "shape.json";
  std::ofstream(f) << kDiskSpec;
  Json file_spec = load_json_arg(f.string());
  CHECK(file_spec.at("type") == "ball");

  CHECK_THROWS_AS(load_json_arg("{\"type\":"), std::invalid_argument);
  CHECK_THROWS_AS(load_json_arg("/nonexistent/path.json"), std::invalid_argument);
}

TEST_CASE("g17 preserves doubles exactly") {
  Rng rng(3141);
  for (int i = 0; i < 500; ++i) {
    double x = std::exp(rng.uniform(-40, 40)) * (rng.uniform() < 0.5 ? -1 : 1);
    CHECK(std::stod(g17(x)) == x);
  }
  CHECK(std::stod(g17(0.1)) == 0.1);
  CHECK(std::stod(g17(kPi)) == kPi);
}

TEST_CASE("profile CSV layout") {
  Shape disk = Shape::ball({0, 0, 0}, 0.2);
  Kernel flat = Kernel::truncated_constant(1.0, 1.0, 1.0);
  CurvatureProfile prof = curvature_profile(disk, flat, 4);
  std::string csv = profile_csv(prof, 2, {"shape: test"});
  CHECK(csv.rfind("# shape: test", 0) == 0);
  CHECK(csv.find("idx,param,x,y,H,err,eps_min,converged") != std::string::npos);
  CHECK(csv.find("# summary: {") != std::string::npos);
  int rows = 0;
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == 1 + 1 + 4 + 1);  // meta, header, points, summary
}

TEST_CASE("cli kernel-check reports admissibility") {
  CliRun ok = run_cli(std::string("kernel-check --kernel '") + kExpSpec + "'");
  CHECK(ok.exit_code == 0);
  Json rep = Json::parse(ok.out);
  CHECK(rep.at("admissibility").at("admissible") == true);
  CHECK(rep.at("nondegenerate_at_zero") == true);

  CliRun bad = run_cli(
      R"(kernel-check --kernel '{"type":"fractional","params":{"alpha":0.5},"beta":1.2}')");
  CHECK(bad.exit_code == 0);
  Json brep = Json::parse(bad.out);
  CHECK(brep.at("admissibility").at("admissible") == false);
  CHECK(brep.at("admissibility").at("near_origin_integral") == "infinite");
}

TEST_CASE("cli rejects malformed input with exit code 2") {
  CHECK(run_cli(R"(kernel-check --kernel '{"type":')").exit_code == 2);
  CHECK(run_cli(R"(kernel-check --kernel '{"type":"gaussian","beta":1}')").exit_code == 2);
  CHECK(run_cli(std::string("profile --shape '") + R"({"type":"torus"})" + "' --kernel '" +
                kExpSpec + "'")
            .exit_code == 2);
}

TEST_CASE("cli profile runs are byte-identical") {
  fs::path a = scratch_dir() / "prof_a.csv";
  fs::path b = scratch_dir() / "prof_b.csv";
  std::string base = std::string("profile --shape '") + kDiskSpec + "' --kernel '" + kExpSpec +
                     "' --n 4 --tol 1e-6 --seed 7 --out ";
  CHECK(run_cli(base + a.string()).exit_code == 0);
  CHECK(run_cli(base + b.string()).exit_code == 0);
  std::string ca = slurp(a), cb = slurp(b);
  CHECK(ca == cb);
  CHECK(!ca.empty());

  // thread count must not change the bytes either
  fs::path c = scratch_dir() / "prof_c.csv";
  CHECK(run_cli(base + c.string(), "NLMC_THREADS=1 ").exit_code == 0);
  CHECK(slurp(c) == ca);
}

TEST_CASE("cli tangent-deriv and moving-planes run clean") {
  CliRun td = run_cli(std::string("tangent-deriv --shape '") + kDiskSpec + "' --kernel '" +
                      kExpSpec + "' --n 4 --format json");
  CHECK(td.exit_code == 0);
  Json jtd = Json::parse(td.out);
  REQUIRE(jtd.at("derivatives").size() == 4);
  for (const Json& row : jtd.at("derivatives"))
    CHECK(std::fabs(row.at("value").get<double>()) <= 1e-7);

  CliRun mp = run_cli(
      R"(moving-planes --shape '{"type":"polygon","params":{"vertices":[[0,0],[1,0],[1,1],[0,1]]}}' --dirs 4 --format json)");
  CHECK(mp.exit_code == 0);
  Json jmp = Json::parse(mp.out);
  CHECK(jmp.at("planes").size() == 4);
}

TEST_CASE("cli counterexample separates the two kernels") {
  CliRun ce = run_cli("counterexample --format json");
  CHECK(ce.exit_code == 0);
  Json rep = Json::parse(ce.out);
  REQUIRE(rep.at("small_sets").size() == 2);
  for (const Json& row : rep.at("small_sets")) {
    CHECK(row.at("rel_diff").get<double>() <= 1e-6);
    CHECK(row.at("profile_spread").get<double>() <= 1e-6);
  }
  CHECK(rep.at("contrast").at("constant") == false);
  CHECK(rep.at("contrast").at("relative_spread").get<double>() > 1e-4);
}

}  // TEST_SUITE

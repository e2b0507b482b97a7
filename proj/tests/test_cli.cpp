#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cstar/cli.hpp"
#include "cstar/io.hpp"
#include "support.hpp"

using namespace cstar;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

const std::string kData = CSTAR_DATA_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
  io::Json json() const { return io::Json::parse(out); }
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return kData + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cstar_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

void check_residuals_have_tolerances(const io::Json& report) {
  REQUIRE(report.contains("residuals"));
  for (const auto& [name, r] : report["residuals"].items()) {
    CAPTURE(name);
    CHECK(r.contains("value"));
    CHECK(r.contains("tol"));
  }
}

}  // namespace

TEST_CASE("spectrum of the worked example") {
  const Outcome o = run_cli({"spectrum", "--input", data("spectrum_a.json"), "--field", "complex"});
  REQUIRE(o.code == 0);
  const io::Json j = o.json();
  CHECK(j["command"] == "spectrum");
  CHECK(j["seed"] == 0);
  REQUIRE(j["results"]["points"].size() == 2);
  CHECK(j["results"]["points"][0].get<double>() == doctest::Approx(2.0));
  CHECK(j["results"]["points"][1].get<double>() == doctest::Approx(5.0));
  check_residuals_have_tolerances(j);

  const io::Json real = run_cli({"spectrum", "--input", data("rotation.json"), "--field", "real"}).json();
  CHECK(real["results"]["points"].empty());
}

TEST_CASE("precondition failures exit with 1") {
  const Outcome o = run_cli({"sqrt", "--input", data("notpositive.json")});
  CHECK(o.code == 1);
  CHECK(o.err.find("NotPositive") != std::string::npos);
  CHECK(o.out.empty());
  CHECK(run_cli({"neumann", "--input", data("beurling.json")}).code == 1);
  CHECK(run_cli({"characters", "--input", data("rotation.json"), "--input", data("exp_upper.json")}).code == 1);
}

TEST_CASE("malformed input and usage errors exit with 2") {
  CHECK(run_cli({"spectrum", "--input", data("truncated.json")}).code == 2);
  CHECK(run_cli({"spectrum", "--input", data("does_not_exist.json")}).code == 2);
  CHECK(run_cli({"spectrum"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"spectrum", "--input", data("spectrum_a.json"), "--field", "quaternion"}).code == 2);
  CHECK(run_cli({"radius", "--input", data("beurling.json"), "--n-max", "0"}).code == 2);
  CHECK(run_cli({"spectrum", "--input", data("e1.json")}).code == 2);

  const fs::path bad = scratch("bad_shape.json");
  write_text(bad, R"({"rows": 2, "cols": 2, "data": [[1, 0], [2, 0], [3, 0]]})");
  const Outcome o = run_cli({"spectrum", "--input", bad.string()});
  CHECK(o.code == 2);
  CHECK(o.err.find("MalformedInput") != std::string::npos);
  write_text(bad, R"({"rows": 1, "cols": 1, "data": [["x", 0]]})");
  CHECK(run_cli({"spectrum", "--input", bad.string()}).code == 2);
}

TEST_CASE("qm table") {
  const Outcome o = run_cli({"qm", "--grid", "2000", "--levels", "5", "--length", "1"});
  REQUIRE(o.code == 0);
  const io::Json j = o.json();
  REQUIRE(j["results"]["levels"].size() == 5);
  for (const auto& row : j["results"]["levels"]) {
    CHECK(std::abs(row["position"].get<double>() - 0.5) <= 1e-3);
  }
  CHECK(std::abs(j["results"]["levels"][0]["cosine"].get<double>() - 1.0) <= 1e-3);
  CHECK(j["inputs"]["grid"] == 2000);
  check_residuals_have_tolerances(j);
  CHECK(run_cli({"qm", "--grid", "10", "--levels", "11"}).code == 1);
}

TEST_CASE("every subcommand produces a report with residuals") {
  const std::vector<std::vector<std::string>> runs{
      {"radius", "--input", data("beurling.json"), "--n-max", "1024"},
      {"exp", "--input", data("exp_upper.json")},
      {"sqrt", "--input", data("positive.json")},
      {"neumann", "--input", data("contraction.json")},
      {"gelfand", "--input", data("diag12.json")},
      {"characters", "--input", data("diag12.json")},
      {"gkz", "--input", data("upper_left.json")},
      {"gns", "--input", data("e1.json")},
      {"universal", "--input", data("diag12.json")},
      {"quotient-norm", "--input", data("diag312.json"), "--input", data("ideal_e22.json"), "--input",
       data("ideal_e33.json")},
  };
  for (const auto& args : runs) {
    CAPTURE(args[0]);
    const Outcome o = run_cli(args);
    REQUIRE(o.code == 0);
    const io::Json j = o.json();
    CHECK(j["command"] == args[0]);
    CHECK(j.contains("inputs"));
    CHECK(j.contains("results"));
    CHECK(j["residuals"].size() > 0);
    check_residuals_have_tolerances(j);
    for (const auto& [name, r] : j["residuals"].items()) {
      CAPTURE(name);
      const double value = r["value"].get<double>();
      const double tol = r["tol"].get<double>();
      if (r.value("bound", "upper") == "lower") {
        CHECK(value > tol);
      } else {
        CHECK(value <= tol);
      }
    }
  }
}

TEST_CASE("report values") {
  const io::Json radius = run_cli({"radius", "--input", data("beurling.json"), "--n-max", "1024"}).json();
  CHECK(std::abs(radius["results"]["estimate"].get<double>() - 2.0) <= 1e-3);
  CHECK(radius["results"]["terms"][0][1].get<double>() == doctest::Approx(2.28825).epsilon(1e-5));

  const io::Json sq = run_cli({"sqrt", "--input", data("positive.json")}).json();
  const CMat s = io::matrix_from_json(sq["results"]["matrix"]);
  CHECK(max_abs_diff(s, mat({{3, 4}, {4, 7}})) < 1e-8);

  const io::Json q = run_cli({"quotient-norm", "--input", data("diag312.json"), "--input",
                              data("ideal_e22.json"), "--input", data("ideal_e33.json")})
                         .json();
  CHECK(std::abs(q["results"]["quotient_norm"].get<double>() - 3.0) < 1e-4);

  const io::Json g = run_cli({"gns", "--input", data("e1.json")}).json();
  CHECK(g["results"]["hilbert_dim"] == 2);
}

TEST_CASE("--out writes the report to a file") {
  const fs::path target = scratch("report.json");
  fs::remove(target);
  const Outcome o = run_cli({"exp", "--input", data("exp_upper.json"), "--out", target.string()});
  REQUIRE(o.code == 0);
  CHECK(o.out.empty());
  std::ifstream in(target);
  const io::Json j = io::Json::parse(in);
  CHECK(j["command"] == "exp");
}

TEST_CASE("seed is echoed and reports are deterministic") {
  const std::vector<std::string> args{"gkz", "--input", data("upper_left.json"), "--seed", "17"};
  const Outcome a = run_cli(args);
  const Outcome b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.json()["seed"] == 17);
  for (const auto& sub : std::vector<std::vector<std::string>>{
           {"universal", "--input", data("diag12.json")},
           {"quotient-norm", "--input", data("diag312.json"), "--input", data("ideal_e22.json")},
           {"gelfand", "--input", data("diag12.json")}}) {
    CHECK(run_cli(sub).out == run_cli(sub).out);
  }
}

TEST_CASE("matrix files round-trip bit-exactly") {
  Rng rng(80);
  const CMat m = rng.matrix(5);
  const fs::path p = scratch("roundtrip.json");
  write_text(p, io::matrix_to_json(m).dump());
  const CMat back = io::parse_matrix(p.string());
  REQUIRE(back.rows() == 5);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) CHECK(back(i, j) == m(i, j));

  // extreme but finite doubles survive too
  CMat e(1, 3);
  e << Complex(1e-308, -1.7976931348623157e308), Complex(0.1, 1.0 / 3.0), Complex(-0.0, 5e-324);
  const CMat eb = io::parse_matrix_text(io::matrix_to_json(e).dump());
  for (Eigen::Index j = 0; j < 3; ++j) CHECK(eb(0, j) == e(0, j));

  const CMat id = io::parse_matrix_text(R"({"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[1,0]]})");
  CHECK(id == identity(2));
  try {
    io::parse_matrix_text(R"({"rows":2,"cols":2,"data":[[1,0],[0,0)");
    FAIL("expected MalformedInput");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::MalformedInput);
  }
}

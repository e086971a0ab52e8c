#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "restor/cli.hpp"
#include "restor/model_io.hpp"

using namespace restor;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "restor");
  std::ostringstream capture;
  auto* old = std::cout.rdbuf(capture.rdbuf());
  const int status = dispatch(args);
  std::cout.rdbuf(old);
  return {status, capture.str()};
}

std::string model(const std::string& name) {
  const char* dir = std::getenv("RESTOR_MODELS_DIR");
  return (fs::path(dir ? dir : "models") / name).string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "restor_cli_test";
  fs::create_directories(dir);
  setenv("RESTOR_OUT_DIR", dir.c_str(), 1);
  return dir;
}

}  // namespace

TEST_CASE("check reports a4 on a constant average") {
  scratch();
  const Result r = run({"check", "--model", model("constant_average.json")});
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["a4"]["verdict"] == true);
  CHECK(j["a1"]["verdict"] == false);
  CHECK(j["manifest"]["command"] == "check");
  CHECK(j["manifest"]["model_hash"].get<std::string>().size() == 16);
}

TEST_CASE("arith on a periodic frequency") {
  const fs::path dir = scratch();
  const Result r = run({"arith", "--omega", "1", "--q-max", "50", "--eps", "0.1,0.05",
                        "--out", "periodic"});
  REQUIRE(r.status == 0);
  std::ifstream psi(dir / "periodic.psi.csv");
  std::string line;
  std::getline(psi, line);
  CHECK(line == "Q,Psi,Q_Psi\r");
  int rows = 0;
  while (std::getline(psi, line)) {
    ++rows;
    CHECK(line.substr(line.find(',') + 1, 2) == "1,");
  }
  CHECK(rows == 50);
  CHECK(fs::exists(dir / "periodic.manifest.json"));
  const json m = json::parse(slurp(dir / "periodic.manifest.json"));
  CHECK(m["outputs"].size() == 2);
}

TEST_CASE("drift example agrees with the closed form") {
  const fs::path dir = scratch();
  const Result r = run({"drift", "--mode", "example", "--out", "example.json"});
  REQUIRE(r.status == 0);
  const json j = json::parse(slurp(dir / "example.json"));
  CHECK(j["max_rel_deviation"].get<double>() < 1e-6);
  CHECK(j["eps"] == 1e-3);
  CHECK(j.contains("manifest"));
  CHECK(fs::exists(dir / "example.plot.csv"));
}

TEST_CASE("outputs are reproducible") {
  const fs::path dir = scratch();
  const std::vector<std::string> args{"drift", "--model", model("single_harmonic.json"),
                                      "--mode", "thm1", "--eps", "1e-2,1e-3", "--samples",
                                      "2", "--out", "rep.json"};
  REQUIRE(run(args).status == 0);
  const std::string plot = slurp(dir / "rep.plot.csv");
  const std::string traj = slurp(dir / "rep.traj.e1.csv");
  json first = json::parse(slurp(dir / "rep.json"));
  REQUIRE(run(args).status == 0);
  CHECK(slurp(dir / "rep.plot.csv") == plot);
  CHECK(slurp(dir / "rep.traj.e1.csv") == traj);
  json second = json::parse(slurp(dir / "rep.json"));
  first.erase("manifest");
  second.erase("manifest");
  CHECK(first == second);
}

TEST_CASE("integrate and normalform") {
  const fs::path dir = scratch();
  Result r = run({"integrate", "--model", model("single_harmonic.json"), "--eps", "0.01",
                  "--t-final", "1", "--dt", "0.01", "--theta0", "0.75,0", "--I0", "1,0",
                  "--stride", "10", "--out", "traj.csv"});
  REQUIRE(r.status == 0);
  const std::string csv = slurp(dir / "traj.csv");
  CHECK(csv.rfind("t,theta1,theta2,I1,I2,H\r\n", 0) == 0);

  r = run({"normalform", "--model", model("single_harmonic.json"), "--eps", "0.01",
           "--theta-grid", "4", "--action-samples", "2"});
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["truncation_Q"] == 100);
  CHECK(j.contains("C_star"));
  CHECK(j.contains("fbar"));
}

TEST_CASE("errors are machine readable") {
  scratch();
  Result r = run({"check", "--model", model("single_harmonic.json"), "--bogus"});
  CHECK(r.status == 2);
  CHECK(json::parse(r.out)["error"]["code"] == "usage");

  const fs::path bad = fs::temp_directory_path() / "restor_bad_model.json";
  std::ofstream(bad) << "{ not json";
  r = run({"check", "--model", bad.string()});
  CHECK(r.status == 3);
  CHECK(json::parse(r.out)["error"]["code"] == "invalid_model");

  r = run({"drift", "--model", model("single_harmonic.json"), "--mode", "thm3"});
  CHECK(r.status == 4);
  CHECK(json::parse(r.out)["error"]["code"] == "refused");
}

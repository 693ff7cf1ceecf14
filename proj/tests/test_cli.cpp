#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "caplab/cli.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("wedge subcommand writes the gap report") {
  const fs::path dir = fresh_dir("caplab_cli_wedge");
  const int rc = caplab::cli::run({"wedge", "--l", "1", "--r", "0.1", "--sigma", "-0.5",
                                   "--output-dir", dir.string()});
  CHECK(rc == 0);
  const std::string j = slurp(dir / "wedge.json");
  CHECK(j.find("0.113606797") != std::string::npos);
  CHECK(j.find("conventions") != std::string::npos);
}

TEST_CASE("angles accept deg and rad suffixes") {
  const fs::path dir = fresh_dir("caplab_cli_angle");
  CHECK(caplab::cli::run({"hk-verify", "--cap", "r=1,theta=120deg", "--n-profile", "600",
                          "--output-dir", dir.string()}) == 0);
  CHECK(caplab::cli::run({"hk-verify", "--cap", "r=1,theta=2.0943951023931953rad",
                          "--n-profile", "600", "--output-dir", dir.string()}) == 0);
}

TEST_CASE("forced tolerance flips the exit code to 2") {
  const fs::path dir = fresh_dir("caplab_cli_force");
  const int rc = caplab::cli::run({"torsion-check", "--cap", "r=1,theta=120deg", "--h",
                                   "0.05", "--tolerance", "1e-9", "--output-dir",
                                   dir.string()});
  CHECK(rc == 2);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(caplab::cli::run({"no-such-command"}) == 1);
  CHECK(caplab::cli::run({"hk-verify"}) == 1);  // neither --cap nor --profile
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  const fs::path a = fresh_dir("caplab_cli_det_a");
  const fs::path b = fresh_dir("caplab_cli_det_b");
  for (const auto& dir : {a, b}) {
    CHECK(caplab::cli::run({"hk-verify", "--cap", "r=1,theta=100deg", "--n-profile", "800",
                            "--samples", "2000", "--seed", "99", "--output-dir",
                            dir.string()}) == 0);
    CHECK(caplab::cli::run({"scaling-study", "--steps", "4", "--m0", "0.3", "--output-dir",
                            dir.string()}) == 0);
  }
  CHECK(slurp(a / "hk_verify.json") == slurp(b / "hk_verify.json"));
  CHECK(slurp(a / "scaling.csv") == slurp(b / "scaling.csv"));
  CHECK(slurp(a / "scaling.dat") == slurp(b / "scaling.dat"));
}

TEST_CASE("JSON config overrides command-line flags") {
  const fs::path dir = fresh_dir("caplab_cli_config");
  const fs::path cfg = dir / "cfg.json";
  {
    std::ofstream f(cfg);
    f << R"({"r": 0.05})";
  }
  // flag says r=0.1, config overrides to 0.05; gap(l=1, r=0.05, -0.5)
  CHECK(caplab::cli::run({"wedge", "--l", "1", "--r", "0.1", "--sigma", "-0.5", "--config",
                          cfg.string(), "--output-dir", dir.string()}) == 0);
  const std::string j = slurp(dir / "wedge.json");
  CHECK(j.find("\"r\": 0.05") != std::string::npos);
}

TEST_CASE("calibrate gate passes on the shipped conventions") {
  const fs::path dir = fresh_dir("caplab_cli_cal");
  CHECK(caplab::cli::run({"calibrate", "--angles-per-regime", "10", "--output-dir",
                          dir.string()}) == 0);
  const std::string j = slurp(dir / "calibrate.json");
  CHECK(j.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("report subcommand combines the evaluators") {
  const fs::path dir = fresh_dir("caplab_cli_report");
  CHECK(caplab::cli::run({"report", "--cap", "r=1,theta=120deg", "--h", "0.05",
                          "--output-dir", dir.string()}) == 0);
  const std::string j = slurp(dir / "report.json");
  CHECK(j.find("reilly") != std::string::npos);
  CHECK(j.find("stability_chain") != std::string::npos);
  CHECK(j.find("conventions") != std::string::npos);
}

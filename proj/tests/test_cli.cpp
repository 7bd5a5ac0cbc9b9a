#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "sabrlab/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using sabrlab::read_text_file;
using sabrlab::write_text_file;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SABRLAB_CLI) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sabrlab_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("re-runs with the same config are byte-identical") {
  const auto dir = scratch("determinism");
  const std::string a = (dir / "a").string();
  const std::string b = (dir / "b").string();
  REQUIRE(run_cli("figure1 --n-paths 6 --seed 42 --horizon 5 --dt 0.01 --out " + a) == 0);
  REQUIRE(run_cli("figure1 --n-paths 6 --seed 42 --horizon 5 --dt 0.01 --out " + b) == 0);

  CHECK(read_text_file(a + "/paths.csv") == read_text_file(b + "/paths.csv"));
  CHECK(read_text_file(a + "/summary.json") == read_text_file(b + "/summary.json"));

  auto ma = json::parse(read_text_file(a + "/manifest.json"));
  auto mb = json::parse(read_text_file(b + "/manifest.json"));
  ma.erase("timestamp");
  mb.erase("timestamp");
  CHECK(ma.dump() == mb.dump());

  SUBCASE("different seeds change the payload") {
    const std::string c = (dir / "c").string();
    REQUIRE(run_cli("figure1 --n-paths 6 --seed 43 --horizon 5 --dt 0.01 --out " + c) == 0);
    CHECK(read_text_file(a + "/paths.csv") != read_text_file(c + "/paths.csv"));
  }
}

TEST_CASE("paths are emitted in long format") {
  const auto dir = scratch("format");
  REQUIRE(run_cli("figure1 --n-paths 2 --seed 1 --horizon 1 --dt 0.25 --out " + dir.string()) == 0);
  const auto csv = read_text_file((dir / "paths.csv").string());
  CHECK(csv.rfind("path_id,t,x,y,absorbed\n", 0) == 0);
  // 2 paths x 5 grid points + header
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
}

TEST_CASE("config file merges under flag overrides") {
  const auto dir = scratch("config");
  const auto cfg = dir / "cfg.json";
  write_text_file(cfg.string(), R"({"beta": 0.0, "rho": 0.0, "seed": 9, "n-paths": 4})");
  const std::string out = (dir / "out").string();
  REQUIRE(run_cli("figure1 --config " + cfg.string() + " --horizon 2 --dt 0.1 --beta 0.5 --out " +
                  out) == 0);
  const auto manifest = json::parse(read_text_file(out + "/manifest.json"));
  CHECK(manifest["config"]["beta"] == 0.5);  // flag wins
  CHECK(manifest["config"]["rho"] == 0.0);   // file fills the rest
  CHECK(manifest["config"]["seed"] == 9);
  CHECK(manifest["config"]["n-paths"] == 4);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  SUBCASE("config validation failure") {
    CHECK(run_cli("figure1 --beta 2.0 --out " + (dir / "x").string()) == 1);
  }
  SUBCASE("numeric domain failure") {
    CHECK(run_cli("absorption --beta 1.0 --n-paths 10 --out " + (dir / "y").string()) == 2);
  }
  SUBCASE("closability and boundary checks pass") {
    CHECK(run_cli("closability --check --out " + (dir / "c").string()) == 0);
    CHECK(run_cli("boundary_class --check --out " + (dir / "b").string()) == 0);
  }
}

TEST_SUITE_END();

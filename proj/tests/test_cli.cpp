#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sys/wait.h>

#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(HFCAL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::string kConfig = hfcal::test::config_path("run.cfg");

}  // namespace

TEST_CASE("command line") {
  const fs::path out = fs::temp_directory_path() / "hfcal_cli_test";
  fs::remove_all(out);

  SUBCASE("usage and configuration errors exit with 2") {
    CHECK(run("") == 2);
    CHECK(run("analyze") == 2);
    CHECK(run("analyze --config /nonexistent/run.cfg") == 2);
    CHECK(run("analyze --config " + kConfig + " --scenario S9 --out " + out.string()) == 2);
    CHECK(run("analyze --config " + kConfig + " --channel tau --out " + out.string()) == 2);
    CHECK(run("analyze --config " + kConfig + " --events -5 --out " + out.string()) == 2);
  }
  SUBCASE("bad event file exits with 1") {
    fs::create_directories(out);
    std::ofstream(out / "bad.txt") << "E 0 0 b\nP 0 5 initial 3 1 0 0 1 0 0 0\n";
    CHECK(run("analyze --config " + kConfig + " --input " + (out / "bad.txt").string() + " --out " + out.string()) == 1);
  }
  SUBCASE("generate, analyze the file, compare") {
    REQUIRE(run("generate --config " + kConfig + " --sample bs_ds_pi --events 200 --out " + out.string()) == 0);
    CHECK(fs::exists(out / "bs_ds_pi_events.txt"));
    REQUIRE(run("analyze --config " + kConfig + " --input " + (out / "bs_ds_pi_events.txt").string() + " --out " +
                (out / "file").string()) == 0);
    CHECK(fs::exists(out / "file" / "ds_pi_S3" / "report.txt"));
    REQUIRE(run("analyze --config " + kConfig + " --input " + std::string(HFCAL_FIXTURE_DIR) +
                "/two_events.txt --out " + (out / "fixture").string()) == 0);
    for (const char* s : {"S1", "S3"}) {
      REQUIRE(run("analyze --config " + kConfig + " --events 300 --scenario " + s + " --out " + out.string()) == 0);
    }
    REQUIRE(run("compare " + (out / "ds_pi_S1").string() + " " + (out / "ds_pi_S3").string() + " --out " +
                (out / "cmp").string()) == 0);
    const std::string table = slurp(out / "cmp" / "comparison.txt");
    CHECK(table.find("S1") != std::string::npos);
    CHECK(table.find("S3") != std::string::npos);
    CHECK(table.find("separation") != std::string::npos);
    CHECK(fs::exists(out / "cmp" / "comparison.svg"));
    CHECK(run("compare " + (out / "ds_pi_S1").string() + " --out " + (out / "cmp2").string()) == 1);
  }
  SUBCASE("single pi0 channel reports per-energy resolutions") {
    REQUIRE(run("analyze --config " + kConfig + " --channel single_pi0 --events 2000 --out " + out.string()) == 0);
    const std::string report = slurp(out / "single_pi0_S3" / "report.txt");
    CHECK(report.find("[resolution]") != std::string::npos);
    CHECK(report.find("5GeV") != std::string::npos);
  }
  SUBCASE("repeat runs are byte-identical") {
    REQUIRE(run("analyze --config " + kConfig + " --channel pi0pi0 --events 500 --out " + (out / "a").string()) == 0);
    REQUIRE(run("analyze --config " + kConfig + " --channel pi0pi0 --events 500 --threads 3 --out " + (out / "b").string()) == 0);
    for (const auto& e : fs::directory_iterator(out / "a" / "pi0pi0_S3")) {
      CHECK(slurp(e.path()) == slurp(out / "b" / "pi0pi0_S3" / e.path().filename()));
    }
  }
  fs::remove_all(out);
}

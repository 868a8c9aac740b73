// End-to-end checks of the command-line binary: exit codes, artifacts, and
// flag plumbing. The binary path is injected at compile time.
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string out_file = testutil::scratch_path("cli_out_" + std::to_string(counter) + ".txt");
  std::string err_file = testutil::scratch_path("cli_err_" + std::to_string(counter) + ".txt");
  ++counter;
  std::string cmd =
      std::string(SUBIC_CLI_PATH) + " " + args + " > " + out_file + " 2> " + err_file;
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = testutil::read_text(out_file);
  r.err = testutil::read_text(err_file);
  return r;
}

std::string fresh_dir(const std::string& name) {
  std::string d = testutil::scratch_path(name);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("bare invocation and unknown flags are usage errors") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("--no-such-flag").code == 2);
  CHECK(run_cli("fit").code == 2);  // missing required data argument
}

TEST_CASE("missing and invalid inputs map to the documented exit codes") {
  CHECK(run_cli("fit " + testutil::scratch_path("nonexistent.csv")).code == 3);

  std::string dir = fresh_dir("cli_badflag");
  RunResult sim = run_cli("simulate --n 12 --p 10 --row-clusters 2 --col-clusters 2 "
                          "--sigma 0.5 --seed 1 --out-dir " + dir);
  REQUIRE(sim.code == 0);
  CHECK(run_cli("fit " + dir + "/dataset.csv --lambda1 -3 --out-dir " + dir).code == 2);
  CHECK(run_cli("fit " + dir + "/dataset.csv --scenario bogus --out-dir " + dir).code == 2);
  CHECK(run_cli("fit " + dir + "/dataset.csv --target nope --out-dir " + dir).code == 3);
}

TEST_CASE("the pipeline writes every advertised artifact") {
  std::string dir = fresh_dir("cli_pipeline");
  REQUIRE(run_cli("simulate --n 30 --p 24 --row-clusters 2 --col-clusters 2 --sigma 0.5 "
                  "--seed 7 --out-dir " + dir).code == 0);
  CHECK(fs::exists(dir + "/dataset.csv"));
  CHECK(fs::exists(dir + "/truth.json"));

  RunResult fit = run_cli("fit " + dir + "/dataset.csv --lambda1 200 --lambda2 200 "
                          "--out-dir " + dir);
  REQUIRE(fit.code == 0);
  CHECK(fit.out.find("converged") != std::string::npos);
  CHECK(fs::exists(dir + "/model.json"));
  CHECK(fs::exists(dir + "/row_assignments.csv"));
  CHECK(fs::exists(dir + "/col_assignments.csv"));
  CHECK(fs::exists(dir + "/trace.csv"));

  RunResult ev = run_cli("evaluate " + dir + "/model.json " + dir + "/truth.json --out " +
                         dir + "/report.json");
  REQUIRE(ev.code == 0);
  CHECK(fs::exists(dir + "/report.json"));
  auto rep = nlohmann::ordered_json::parse(testutil::read_text(dir + "/report.json"));
  CHECK(rep.at("cells").at("ri").get<double>() == 1.0);
  CHECK(rep.at("rows").at("ari").get<double>() == 1.0);

  RunResult pred = run_cli("predict " + dir + "/model.json " + dir + "/dataset.csv --out " +
                           dir + "/predictions.csv");
  REQUIRE(pred.code == 0);
  CHECK(pred.out.find("MAE") != std::string::npos);  // dataset carries its target
  std::string preds = testutil::read_text(dir + "/predictions.csv");
  CHECK(preds.rfind("id,y_hat,q0", 0) == 0);

  RunResult heat = run_cli("heatmap " + dir + "/dataset.csv " + dir + "/model.json --out " +
                           dir + "/heatmap.svg");
  REQUIRE(heat.code == 0);
  std::string svg = testutil::read_text(dir + "/heatmap.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
}

TEST_CASE("scenario flags are recorded in the model") {
  std::string dir = fresh_dir("cli_scenario");
  REQUIRE(run_cli("simulate --n 10 --p 8 --row-clusters 2 --col-clusters 2 --sigma 0.5 "
                  "--seed 2 --out-dir " + dir).code == 0);
  REQUIRE(run_cli("fit " + dir + "/dataset.csv --scenario cobra --lambda2 1 --out-dir " +
                  dir).code == 0);
  auto mj = nlohmann::ordered_json::parse(testutil::read_text(dir + "/model.json"));
  CHECK(mj.at("scenario").get<std::string>() == "cobra");
  CHECK(mj.at("config").at("supervised").get<bool>() == false);
  CHECK(mj.at("config").at("use_l2").get<bool>() == false);
}

TEST_CASE("zero penalties leave every row and column in its own cluster") {
  std::string dir = fresh_dir("cli_identity");
  REQUIRE(run_cli("simulate --n 11 --p 9 --row-clusters 2 --col-clusters 2 --sigma 1.0 "
                  "--seed 3 --out-dir " + dir).code == 0);
  REQUIRE(run_cli("fit " + dir + "/dataset.csv --lambda1 0 --lambda2 0 --out-dir " +
                  dir).code == 0);
  auto mj = nlohmann::ordered_json::parse(testutil::read_text(dir + "/model.json"));
  CHECK(mj.at("k_rows").get<int>() == 11);
  CHECK(mj.at("k_cols").get<int>() == 9);
}

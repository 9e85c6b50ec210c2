#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "test_util.hpp"

using nlohmann::json;

namespace {

std::string model(const std::string& name) {
  return " --model " + tt::repo_path("models/" + name);
}

std::string stat(const std::string& name) {
  return " --statistic " + tt::repo_path("stats/" + name);
}

}  // namespace

TEST_CASE("selftest passes and reports canonical JSON") {
  const tt::tool_result r = tt::run_tool("selftest");
  CHECK(r.exit_code == 0);
  const json out = json::parse(r.out);
  CHECK(out["command"] == "selftest");
  CHECK(out["exit_code"] == 0);
  REQUIRE(out["verdicts"].is_array());
  for (const auto& v : out["verdicts"]) CHECK(v["pass"].get<bool>());

  const tt::tool_result again = tt::run_tool("selftest");
  CHECK(again.out == r.out);
}

TEST_CASE("sufficiency verdicts drive the exit code") {
  const tt::tool_result ok =
      tt::run_tool("check-sufficiency" + model("fam_bin.json") +
                   stat("count_x.json"));
  CHECK(ok.exit_code == 0);
  const json jok = json::parse(ok.out);
  CHECK(jok["verdicts"][0]["name"] == "sufficiency");
  CHECK(jok["verdicts"][0]["holds"].get<bool>());

  const tt::tool_result bad =
      tt::run_tool("check-sufficiency" + model("fam_bin.json") +
                   stat("parity_x.json"));
  CHECK(bad.exit_code == 1);
  const json jbad = json::parse(bad.out);
  CHECK(jbad["exit_code"] == 1);
  CHECK(jbad["verdicts"][0]["cmi_bits"].get<double>() > 0.05);
  CHECK(jbad["verdicts"][0].contains("witness"));
}

TEST_CASE("the minimal partition is printed class by class") {
  const tt::tool_result r = tt::run_tool("minimal-stat" + model("fam_bin.json"));
  CHECK(r.exit_code == 0);
  const json out = json::parse(r.out);
  const json want = json::array({json::array({"00"}),
                                 json::array({"01", "10"}),
                                 json::array({"11"})});
  CHECK(out["verdicts"][0]["partition"]["classes"] == want);
}

TEST_CASE("the helper corner rate of the bit pair is exactly one bit") {
  const tt::tool_result r = tt::run_tool("corner-point" + model("ab_pair.json"));
  CHECK(r.exit_code == 0);
  const json out = json::parse(r.out);
  CHECK(out["verdicts"][0]["corner_bits"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a generic chain check names its grouped axes") {
  const tt::tool_result r = tt::run_tool(
      "check-markov" + model("fam_dep.json") + " --a theta --b x --c y");
  CHECK(r.exit_code == 1);
  const json out = json::parse(r.out);
  const double cmi = out["verdicts"][0]["cmi_bits"].get<double>();
  CHECK(std::abs(cmi - 0.0812427456505176) <= 1e-10);
}

TEST_CASE("frontier artifacts are written with unix line endings") {
  const std::string dir = "/tmp/suffstat_cli_art";
  std::filesystem::remove_all(dir);
  const tt::tool_result r = tt::run_tool(
      "ak-frontier" + model("ab_pair.json") +
      " --ucard 3 --budget 5 --seed 4 --out " + dir);
  CHECK(r.exit_code == 0);
  std::ifstream in(dir + "/frontier.csv", std::ios::binary);
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.rfind("r1_bits,r2_bits\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);

  const tt::tool_result again = tt::run_tool(
      "ak-frontier" + model("ab_pair.json") +
      " --ucard 3 --budget 5 --seed 4 --out " + dir);
  CHECK(again.out == r.out);
}

TEST_CASE("usage problems exit with code two") {
  CHECK(tt::run_tool("").exit_code == 2);
  CHECK(tt::run_tool("no-such-verb").exit_code == 2);
  CHECK(tt::run_tool("selftest --no-such-flag").exit_code == 2);
}

TEST_CASE("model problems exit with code three and a structured error") {
  const tt::tool_result r =
      tt::run_tool("check-sufficiency --model /nonexistent.json" +
                   stat("count_x.json"));
  CHECK(r.exit_code == 3);
  const json out = json::parse(r.out);
  CHECK(out["exit_code"] == 3);
  CHECK(out["error"]["code"] == "MODEL_ERROR");

  const tt::tool_result pre = tt::run_tool(
      "rd-equality" + model("rd_zn.json") + stat("zn_const.json") +
      " --dgrid 0.05:0.2:3");
  CHECK(pre.exit_code == 3);
  CHECK(json::parse(pre.out)["error"]["code"] == "PRECONDITION_FAILED");

  const tt::tool_result grid = tt::run_tool(
      "rd-curve" + model("rd_sanity.json") + " --dgrid nonsense");
  CHECK(grid.exit_code == 3);

  const tt::tool_result tri =
      tt::run_tool("example-triangle --theta 0 --theta 1 --trials 10");
  CHECK(tri.exit_code == 3);
  CHECK(json::parse(tri.out)["error"]["code"] == "EMPTY_COMMON_SUPPORT");
}

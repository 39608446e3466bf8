#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "cli.hpp"

namespace {

using namespace sprec;
using namespace sprec::cli;

RunConfig config(const std::string& command) {
  RunConfig c;
  c.command = command;
  c.samples = 100000;
  return c;
}

Json run_json(const RunConfig& c, const Json& input, int expected_exit = ok) {
  const RunResult r = run(c, input);
  EXPECT_EQ(r.exit_code, expected_exit) << r.error;
  return r.output.empty() ? Json() : Json::parse(r.output);
}

TEST(Cli, EtaShuffleClosedForm) {
  const Json out = run_json(config("eta"), Json::parse(R"({"copula":{"node":"shuffle","gamma":0.3}})"));
  EXPECT_DOUBLE_EQ(out["eta"].get<double>(), 0.3);
  EXPECT_EQ(out["xi"], 0);
  EXPECT_EQ(out["method"], "closed_form");
  for (const char* key : {"seed", "samples", "method", "tool_version"}) EXPECT_TRUE(out.contains(key)) << key;
}

TEST(Cli, EtaMethodOverrideAndMarginals) {
  const Json in = Json::parse(R"({"copula":{"node":"gaussian","rho":0.5},
      "g1":{"kind":"normal","mean":0,"sd":1},"g2":{"kind":"normal","mean":1,"sd":1},"method":"monte_carlo"})");
  RunConfig c = config("eta");
  c.seed = 17;
  const Json out = run_json(c, in);
  EXPECT_EQ(out["method"], "monte_carlo");
  EXPECT_EQ(out["seed"], 17);
  EXPECT_EQ(out["samples"], 100000);
  EXPECT_NEAR(out["eta"].get<double>(), 0.841345, 4 * out["stderr_eta"].get<double>());
  Json bad = in;
  bad["method"] = "guess";
  run_json(c, bad, schema_error);
}

TEST(Cli, GammaVerdicts) {
  RunConfig c = config("eta");
  c.gamma = 0.2;
  EXPECT_EQ(run_json(c, Json::parse(R"({"copula":{"node":"shuffle","gamma":0.3}})"))["verdict"], "holds");
  c.gamma = 0.5;
  EXPECT_EQ(run_json(c, Json::parse(R"({"copula":{"node":"shuffle","gamma":0.3}})"))["verdict"], "fails");
  const Json close = Json::parse(R"({"copula":{"node":"independence"},"method":"monte_carlo"})");
  EXPECT_EQ(run_json(c, close, inconclusive)["verdict"], "inconclusive");
  c.gamma = 1.5;
  run_json(c, close, schema_error);
}

TEST(Cli, ClassifyShuffle) {
  RunConfig c = config("classify");
  c.gamma = 0.3;
  const Json out = run_json(c, Json::parse(R"({"copula":{"node":"shuffle","gamma":0.3}})"));
  EXPECT_EQ(out["in_L_gamma"], true);
  EXPECT_EQ(out["in_B_gamma"], true);
  c.output = "csv";
  const RunResult csv = run(c, Json::parse(R"({"copula":{"node":"shuffle","gamma":0.3}})"));
  EXPECT_EQ(csv.output.rfind("# tool_version=", 0), 0u);
  EXPECT_NE(csv.output.find("true,true"), std::string::npos);
}

TEST(Cli, OrderRelations) {
  RunConfig c = config("order");
  c.relation = "st";
  const Json out = run_json(c, Json::parse(R"({"g1":{"kind":"normal","mean":0,"sd":1},
      "g2":{"kind":"normal","mean":1,"sd":2}})"));
  EXPECT_EQ(out["holds"], false);
  EXPECT_EQ(out["method"], "analytic");
  EXPECT_LT(out["witness"].get<double>(), 0.0);
  c.relation = "lr";
  EXPECT_EQ(run_json(c, Json::parse(R"({"g1":{"kind":"exponential","rate":2},
      "g2":{"kind":"exponential","rate":1}})"))["holds"], true);
  c.relation = "qr";
  run_json(c, Json::parse(R"({"g1":{"kind":"exponential","rate":2},"g2":{"kind":"exponential","rate":1}})"),
           schema_error);
}

TEST(Cli, RankTable) {
  const Json in = Json::parse(R"({"target":{"kind":"normal","mean":0,"sd":1},"prospects":[
      {"name":"A","marginal":{"kind":"normal","mean":1,"sd":1},"copula":{"node":"gaussian","rho":0}},
      {"name":"B","marginal":{"kind":"normal","mean":2,"sd":1},"copula":{"node":"gaussian","rho":0}}]})");
  const Json out = run_json(config("rank"), in);
  EXPECT_EQ(out["rows"][0]["name"], "B");
  EXPECT_NEAR(out["rows"][0]["eta_or_bound"].get<double>(), 0.921350, 1e-6);
  RunConfig c = config("rank");
  c.output = "csv";
  const RunResult csv = run(c, in);
  EXPECT_EQ(csv.exit_code, ok);
  EXPECT_NE(csv.output.find("\n1,B,0.921350396475"), std::string::npos) << csv.output;
}

TEST(Cli, SampleRows) {
  RunConfig c = config("sample");
  c.samples = 5;
  c.output = "csv";
  const RunResult r = run(c, Json::parse(R"({"copula":{"node":"shuffle","gamma":0.3}})"));
  ASSERT_EQ(r.exit_code, ok) << r.error;
  std::istringstream lines(r.output);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] != '#') ++rows;
  EXPECT_EQ(rows, 6);
}

TEST(Cli, CurveIsIncreasing) {
  const Json out = run_json(config("curve"), Json::object());
  const auto& pts = out["points"];
  ASSERT_EQ(pts.size(), 19u);
  EXPECT_EQ(pts[0]["rho"], -0.9);
  EXPECT_EQ(pts[18]["rho"], 0.9);
  for (std::size_t i = 1; i < pts.size(); ++i)
    EXPECT_GT(pts[i]["eta"].get<double>(), pts[i - 1]["eta"].get<double>());
  run_json(config("curve"), Json::parse(R"({"step":0})"), schema_error);
}

TEST(Cli, VerifyGroups) {
  RunConfig c = config("verify");
  // The fixed tolerances are sized for the default sample count.
  c.samples = 1000000;
  const Json out = run_json(c, Json::parse(R"({"checks":["grid","mo"]})"));
  EXPECT_EQ(out["passed"], true);
  for (const auto& ch : out["checks"]) EXPECT_TRUE(ch["passed"].get<bool>()) << ch["name"];
  run_json(c, Json::parse(R"({"checks":["nope"]})"), schema_error);
}

TEST(Cli, SchemaErrors) {
  run_json(config("eta"), Json::parse(R"({"copula":{"node":"shuffle","gamma":0}})"), schema_error);
  run_json(config("eta"), Json::parse(R"({})"), schema_error);
  run_json(config("frobnicate"), Json::object(), schema_error);
  RunConfig c = config("eta");
  c.output = "xml";
  run_json(c, Json::parse(R"({"copula":{"node":"independence"}})"), schema_error);
  EXPECT_THROW(load_input("/nonexistent/spec.json"), SchemaError);
  EXPECT_TRUE(load_input("").empty());
}

TEST(Cli, OutputIsDeterministic) {
  const Json in = Json::parse(R"({"copula":{"node":"mo_survival","alpha1":0.4,"alpha2":0.2}})");
  RunConfig c = config("sample");
  c.samples = 1000;
  c.seed = 99;
  c.workers = 3;
  EXPECT_EQ(run(c, in).output, run(c, in).output);
  c.command = "eta";
  Json mc = in;
  mc["method"] = "monte_carlo";
  EXPECT_EQ(run(c, mc).output, run(c, mc).output);
}

TEST(Cli, FormatNumber) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0 / 3.0), "0.666666666667");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
}

TEST(Cli, WorkersFromEnvironment) {
  ::setenv("SP_COPULA_THREADS", "1", 1);
  EXPECT_EQ(workers_from_env(), 1u);
  ::unsetenv("SP_COPULA_THREADS");
  EXPECT_GE(workers_from_env(), 1u);
}

}  // namespace

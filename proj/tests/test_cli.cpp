#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "witnesskit/cli.hpp"

using namespace witnesskit;
using nlohmann::json;

namespace {

const std::string kData = WITNESSKIT_DATA_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
  json payload() const { return json::parse(out); }
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("witnesskit_cli_" + name);
}

void write_file(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Cli, SolveCircleLine) {
  const Outcome r = run_cli({"solve", "--system", kData + "/circle_line.json", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = r.payload();
  ASSERT_EQ(j.at("solutions").size(), 2u);
  // x = y, 2 x^2 = 1
  for (const auto& s : j.at("solutions")) {
    EXPECT_TRUE(s.at("certified").get<bool>());
    const CVector p = json_io::vector_from_json(s.at("point"));
    EXPECT_NEAR(std::abs(p(0)), std::sqrt(0.5), 1e-12);
    EXPECT_LT(std::abs(p(0) - p(1)), 1e-12);
  }
  EXPECT_EQ(j.at("summary").at("seed"), 7);
}

TEST(Cli, ClassRecover) {
  Outcome r = run_cli({"class", "recover", "--space", "blowup-p2", "--grade", "1", "--degrees", "0,-1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.payload().dump(), R"({"coeffs":[["0","1"],["1","1"]],"labels":["l","E"]})");

  r = run_cli({"class", "recover", "--space", "g14", "--grade", "3", "--degrees", "4,0", "--square"});
  ASSERT_EQ(r.code, 0);
  const json j = r.payload();
  EXPECT_EQ(j.at("coeffs").dump(), R"([["4","1"],["0","1"]])");
  EXPECT_EQ(j.at("square").dump(), R"({"coeffs":[["16","1"]],"labels":["01"]})");

  r = run_cli({"class", "recover", "--space", "pn", "--space-n", "3", "--grade", "1", "--degrees", "7"});
  EXPECT_EQ(r.payload().at("coeffs").dump(), R"([["7","1"]])");

  r = run_cli({"class", "recover", "--space", "g14", "--grade", "3", "--degrees", "4"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.payload().at("error").at("kind"), "DimensionMismatch");
}

TEST(Cli, ClassPairAndDuality) {
  Outcome r = run_cli({"class", "pair", "--space", "blowup-p2", "--grade", "1", "--row", "1", "--col", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.payload().at("degree"), -1);
  r = run_cli({"class", "pair", "--space", "blowup-p2", "--grade", "1", "--row", "5", "--col", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.payload().at("error").at("kind"), "IndexOutOfRange");
  r = run_cli({"class", "duality", "--space", "blowup-p2", "--grade", "1"});
  EXPECT_FALSE(r.payload().at("duality").get<bool>());
  r = run_cli({"class", "duality", "--space", "product", "--space-m", "1", "--space-n", "2", "--grade", "1"});
  EXPECT_TRUE(r.payload().at("duality").get<bool>());
}

TEST(Cli, UsageErrors) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"solve", "--system", kData + "/circle_line.json", "--bogus"},
           {},
           {"frobnicate"},
           {"witness"},
           {"solve"},
           {"solve", "--system", kData + "/circle_line.json", "--seed", "abc"}}) {
    const Outcome r = run_cli(args);
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(r.payload().at("error").at("kind"), "UsageError");
  }
}

TEST(Cli, DomainErrorsAreJson) {
  Outcome r = run_cli({"solve", "--system", "/nonexistent/sys.json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.payload().at("error").at("kind"), "IoError");

  const auto bad = temp_file("bad.json");
  write_file(bad, "{not json");
  r = run_cli({"solve", "--system", bad.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.payload().at("error").at("kind"), "ParseError");

  r = run_cli({"witness", "compute", "--system", kData + "/circle.json", "--dim", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.payload().at("error").at("kind"), "InvalidArgument");

  r = run_cli({"grassmann", "dual", "--index", "44"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.payload().at("error").at("kind"), "InvalidArgument");

  const auto singular = temp_file("singular_quadric.json");
  write_file(singular, R"({"matrix":[[[1,0],[0,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0],[0,0]],
      [[0,0],[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[0,0],[0,0]]]})");
  r = run_cli({"grassmann", "witness", "--quadric", singular.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.payload().at("error").at("kind"), "SingularQuadric");
}

TEST(Cli, HelpListsDefaults) {
  const Outcome r = run_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--match-tol"), std::string::npos);
  EXPECT_NE(r.out.find("1e-06"), std::string::npos);
  EXPECT_NE(r.out.find("grassmann"), std::string::npos);
}

TEST(Cli, WitnessPipeline) {
  const auto ws = temp_file("circle_ws.json");
  Outcome r = run_cli({"witness", "compute", "--system", kData + "/circle.json", "--dim", "1", "--seed", "3", "-o", ws.string()});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(r.out.empty());

  r = run_cli({"witness", "move", "--witness", ws.string(), "--seed", "4"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.payload().at("points").size(), 2u);

  r = run_cli({"witness", "sample", "--witness", ws.string(), "--seed", "5"});
  ASSERT_EQ(r.code, 0);
  const std::string point = r.payload().at("point").dump();
  r = run_cli({"witness", "member", "--witness", ws.string(), "--point", point, "--seed", "6"});
  EXPECT_EQ(r.payload().at("verdict"), "member");
  r = run_cli({"witness", "member", "--witness", ws.string(), "--point", "[[2,0],[2,0]]"});
  EXPECT_EQ(r.payload().at("verdict"), "non-member");

  r = run_cli({"product-witness", "--system", kData + "/parabola.json", "--m", "1", "--n", "1", "--dim", "1"});
  ASSERT_EQ(r.code, 0);
  const json b = r.payload().at("bidegrees");
  EXPECT_EQ(b.dump(), R"([{"a":0,"b":1,"degree":2},{"a":1,"b":0,"degree":1}])");
}

TEST(Cli, GrassmannPipeline) {
  const auto ws = temp_file("quadric_ws.json");
  Outcome r = run_cli({"grassmann", "witness", "--seed", "11", "-o", ws.string()});
  ASSERT_EQ(r.code, 0) << r.out;
  const json w = json_io::read_file(ws.string());
  EXPECT_EQ(w.at("W13").size(), 4u);
  EXPECT_EQ(w.at("W04").size(), 0u);

  r = run_cli({"grassmann", "move", "--witness", ws.string(), "--seed", "12"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.payload().at("W13").size(), 4u);

  const auto line = temp_file("line.json");
  r = run_cli({"grassmann", "sample", "--witness", ws.string(), "--seed", "13", "-o", line.string()});
  ASSERT_EQ(r.code, 0);
  r = run_cli({"grassmann", "member", "--witness", ws.string(), "--line", line.string(), "--seed", "14"});
  EXPECT_EQ(r.payload().at("verdict"), "member");

  r = run_cli({"grassmann", "poset"});
  EXPECT_EQ(r.payload().at("rank_counts").dump(), "[1,1,2,2,2,1,1]");
  r = run_cli({"grassmann", "dual", "--index", "02"});
  EXPECT_EQ(r.payload().at("dual"), "24");
}

TEST(Cli, DeterministicPayloadsAndSeedFallback) {
  const Outcome a = run_cli({"grassmann", "witness", "--seed", "21"});
  const Outcome b = run_cli({"grassmann", "witness", "--seed", "21"});
  const Outcome c = run_cli({"grassmann", "witness", "--seed", "22"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);

  ::setenv("WITNESSKIT_SEED", "21", 1);
  const Outcome env = run_cli({"grassmann", "witness"});
  EXPECT_EQ(env.out, a.out);
  ::setenv("WITNESSKIT_SEED", "not-a-number", 1);
  EXPECT_EQ(run_cli({"grassmann", "witness"}).code, 1);
  ::unsetenv("WITNESSKIT_SEED");
  EXPECT_EQ(run_cli({"grassmann", "witness"}).payload().at("seed"), 0);
}

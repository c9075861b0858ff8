#include "commands.hpp"
#include "process.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <unistd.h>

using namespace ternalg;
using namespace ternalg::cli;
namespace fs = std::filesystem;

namespace {

const std::string kExe = TERNALG_EXE;
const std::string kData = TERNALG_DATA;

using CliRun = ternalg::test::ProcessResult;

CliRun run(const std::string& args) { return ternalg::test::run_command(kExe + " " + args); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ternalg_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, AlgebraCheckGolden) {
  const CliRun r = run("algebra check " + kData + "/golden/c2_heap.json");
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdicts"]["para_associative"]["status"], "pass");
  EXPECT_EQ(j["verdicts"]["para_associative"]["residual"], 0.0);
  EXPECT_EQ(j["verdicts"]["para_associative"]["tolerance"], 1e-9);
  EXPECT_EQ(j["properties"]["commutative"]["status"], "pass");
  EXPECT_EQ(j["outputs"]["products"].size(), 8u);
  EXPECT_EQ(j["inputs"][0]["sha256"].get<std::string>().size(), 64u);
}

TEST_F(CliTest, AntisymmetricFailsWithExitOne) {
  const CliRun r = run("algebra check " + kData + "/golden/antisymmetric.json");
  EXPECT_EQ(r.code, 1);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdicts"]["para_associative"]["residual"], 2.0);
}

TEST_F(CliTest, ZeroAlgebraHasNoBiunits) {
  const CliRun r = run("algebra check " + kData + "/golden/zero2.json");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["properties"]["biunits_among_candidates"].empty());
}

TEST_F(CliTest, EpsFlagIsTheReportedTolerance) {
  const CliRun r = run("algebra check " + kData + "/golden/antisymmetric.json --eps 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["verdicts"]["para_associative"]["tolerance"], 3.0);
}

TEST_F(CliTest, InputErrorsExitTwo) {
  EXPECT_EQ(run("algebra check " + path("missing.json")).code, 2);
  { std::FILE* f = std::fopen(path("bad.json").c_str(), "w"); std::fputs("{\"kind\": ", f); std::fclose(f); }
  EXPECT_EQ(run("algebra check " + path("bad.json")).code, 2);
  EXPECT_EQ(run("algebra frobnicate").code, 2);
  EXPECT_EQ(run("algebra construct --kind nonsense").code, 2);
  EXPECT_EQ(run("algebra construct --kind cyclic_heap").code, 2);
  EXPECT_EQ(run("algebra reduce " + kData + "/golden/c2_heap.json --e 1,0,0").code, 2);
  EXPECT_EQ(run("algebra check " + kData + "/golden/c2_heap.json --format yaml").code, 2);
}

TEST_F(CliTest, ConstructCyclicHeapMatchesGolden) {
  ASSERT_EQ(run("algebra construct --kind cyclic_heap --set k=2 --out " + path("c2.json")).code, 0);
  EXPECT_EQ(io::read_text(path("c2.json")), io::read_text(kData + "/golden/c2_heap.json"));
}

TEST_F(CliTest, ConstructDirectSumOfGoldenFiles) {
  const std::string g = kData + "/golden/c2_heap.json";
  const CliRun r = run("algebra construct --kind direct_sum --input " + g + " --input " + g + " --out " + path("s.json"));
  ASSERT_EQ(r.code, 0);
  const CliRun c = run("algebra check " + path("s.json"));
  EXPECT_EQ(c.code, 0);
  EXPECT_EQ(json::parse(c.out)["properties"]["dim"], 4);
}

TEST_F(CliTest, ReduceAtE1) {
  const CliRun r = run("algebra reduce " + kData + "/golden/c2_heap.json --e 1,0 --out " + path("b.json"));
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdicts"]["associative"]["residual"], 0.0);
  EXPECT_EQ(j["properties"]["unit"], json::parse("[1.0, 0.0]"));
  const BinaryAlgebra B = io::binary_algebra_from_json(io::read_document(path("b.json")));
  EXPECT_EQ(B.M(0, 1, 1), 1.0);
  EXPECT_EQ(B.M(1, 0, 1), 1.0);
}

TEST_F(CliTest, ReduceAtZeroHasNoUnit) {
  const CliRun r = run("algebra reduce " + kData + "/golden/c2_heap.json --e 0,0");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["properties"]["unit"].is_null());
}

TEST_F(CliTest, FieldAndConnectionPipeline) {
  ASSERT_EQ(run("algebra construct --kind constant_field --input " + kData +
                "/golden/c2_heap.json --set origin=0,0 --set spacing=0.5,0.5 --set shape=3,4 --out " +
                path("F.json"))
                .code,
            0);
  ASSERT_EQ(run("algebra construct --kind zero_connection --input " + path("F.json") + " --out " + path("G.json")).code,
            0);
  EXPECT_EQ(run("field check " + path("F.json")).code, 0);
  const CliRun c = run("connection check --field " + path("F.json") + " --connection " + path("G.json"));
  ASSERT_EQ(c.code, 0);
  const json j = json::parse(c.out);
  EXPECT_EQ(j["verdicts"]["differential"]["residual"], 0.0);
  EXPECT_FALSE(j["notes"].empty());
}

TEST_F(CliTest, ScaledLineConnectionFailsByNormOfB) {
  ASSERT_EQ(run("algebra construct --kind scaled_line --input " + kData +
                "/golden/antisymmetric_form.json --set origin=0 --set spacing=0.25 --set shape=5 --out " +
                path("L.json"))
                .code,
            0);
  ASSERT_EQ(run("algebra construct --kind zero_connection --input " + path("L.json") + " --out " + path("Z.json")).code,
            0);
  const CliRun c = run("connection check --field " + path("L.json") + " --connection " + path("Z.json"));
  EXPECT_EQ(c.code, 1);
  EXPECT_NEAR(json::parse(c.out)["verdicts"]["differential"]["residual"].get<double>(), 1.0, 1e-12);
}

TEST_F(CliTest, SphereTransportRun) {
  ASSERT_EQ(run("algebra construct --kind metric --set preset=sphere --set h=0.02 --set phi_hi=6.4 --set phi_h=0.05 "
                "--out " + path("g.json"))
                .code,
            0);
  ASSERT_EQ(run("algebra construct --kind levi_civita --input " + path("g.json") + " --out " + path("G.json")).code, 0);
  ASSERT_EQ(run("algebra construct --kind curve --set preset=latitude --set samples=2001 --out " + path("c.json")).code,
            0);
  const CliRun c = run("connection check --field " + path("g.json") + " --connection " + path("G.json") + " --eps 1e-2");
  EXPECT_EQ(c.code, 0);
  const CliRun t = run("transport run --field " + path("g.json") + " --connection " + path("G.json") + " --curve " +
                    path("c.json") + " --eps 1e-5");
  ASSERT_EQ(t.code, 0) << t.out;
  const json j = json::parse(t.out);
  EXPECT_NEAR(j["outputs"]["map"][0][0].get<double>(), -1.0, 1e-3);
  EXPECT_EQ(j["outputs"]["steps"], 6284);
}

TEST_F(CliTest, CarrollLeviCivitaIsInputError) {
  ASSERT_EQ(run("algebra construct --kind metric --set preset=carroll --set origin=0,0 --set spacing=0.5,0.5 "
                "--set shape=3,3 --out " + path("g.json"))
                .code,
            0);
  EXPECT_EQ(run("algebra construct --kind levi_civita --input " + path("g.json")).code, 2);
  const CliRun f = run("field check " + path("g.json"));
  EXPECT_EQ(f.code, 0);
}

TEST_F(CliTest, TextFormat) {
  const CliRun r = run("algebra check " + kData + "/golden/c2_heap.json --format text");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS para_associative"), std::string::npos);
}

TEST_F(CliTest, ReportDiffIgnoresTiming) {
  const std::string g = kData + "/golden/c2_heap.json";
  ASSERT_EQ(run("algebra check " + g + " --out " + path("r1.json")).code, 0);
  ASSERT_EQ(run("algebra check " + g + " --out " + path("r2.json")).code, 0);
  EXPECT_EQ(run("report diff " + path("r1.json") + " " + path("r2.json")).code, 0);
  ASSERT_EQ(run("algebra check " + kData + "/golden/zero2.json --out " + path("r3.json")).code, 0);
  const CliRun d = run("report diff " + path("r1.json") + " " + path("r3.json"));
  EXPECT_EQ(d.code, 1);
  EXPECT_FALSE(json::parse(d.out)["differences"].empty());
}

TEST(Report, SortedKeysAndTimingOnlyDifference) {
  RunReport a;
  a.command = "x";
  a.verdicts["b"] = Verdict::check(0.5, 1.0);
  a.verdicts["a"] = Verdict::check(2.0, 1.0);
  a.seconds = 1.0;
  RunReport b = a;
  b.seconds = 2.0;
  EXPECT_TRUE(report_diff(a.to_json(), b.to_json()).empty());
  EXPECT_EQ(a.exit_code(), 1);
  const std::string s = io::dump(a.to_json());
  EXPECT_LT(s.find("\"command\""), s.find("\"inputs\""));
  EXPECT_LT(s.find("\"a\""), s.find("\"b\""));
}

TEST(Report, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "prosogate/cli/app.hpp"

namespace fs = std::filesystem;
using prosogate::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "prosogate");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("prosogate_cli_" + std::to_string(::getpid()) + "_" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }

  fs::path dir;
  const std::string grammar = std::string(PROSOGATE_DEMO_DIR) + "/grammar.json";
  const std::string demo = std::string(PROSOGATE_DEMO_DIR) + "/corpus.jsonl";
};

}  // namespace

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(call({}).code, 1);
  EXPECT_EQ(call({"frobnicate"}).code, 1);
  auto r = call({"parse", "--grammar", grammar});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--corpus"), std::string::npos);
  EXPECT_EQ(call({"parse", "--grammar", grammar, "--corpus", demo, "--threshold", "2"}).code, 1);
  EXPECT_EQ(call({"synth", "--format", "xml"}).code, 1);
  EXPECT_EQ(call({"train", "--corpus", demo}).code, 1);  // no --out
  EXPECT_EQ(call({"eval", "--gold", demo}).code, 1);     // no proposals
}

TEST_F(Cli, HelpAndVersionExitZero) {
  EXPECT_EQ(call({"--help"}).code, 0);
  EXPECT_EQ(call({"parse", "--help"}).code, 0);
  auto v = call({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(prosogate::kToolVersion), std::string::npos);
}

TEST_F(Cli, DataErrorsExitTwo) {
  EXPECT_EQ(call({"parse", "--grammar", path("missing.json"), "--corpus", demo}).code, 2);
  std::ofstream(path("bad.jsonl")) << "{\"id\": \"x\", \"words\": [\"a\"], \"gap_scores\": [0.1, 0.2]}\n";
  auto r = call({"parse", "--grammar", grammar, "--corpus", path("bad.jsonl")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("turn x"), std::string::npos);
  std::ofstream(path("unknown.jsonl")) << "{\"id\": \"u\", \"words\": [\"blorp\"], \"gap_scores\": [0.1]}\n";
  auto u = call({"parse", "--grammar", grammar, "--corpus", path("unknown.jsonl")});
  EXPECT_EQ(u.code, 2);
  EXPECT_NE(u.err.find("turn u"), std::string::npos);
  EXPECT_EQ(call({"rank", "--corpus", demo}).code, 2);  // verb-final turns carry no gold gap
}

TEST_F(Cli, SynthIsByteReproducible) {
  ASSERT_EQ(call({"synth", "--seed", "1", "--turns", "10", "--out", path("a.jsonl")}).code, 0);
  ASSERT_EQ(call({"synth", "--seed", "1", "--turns", "10", "--out", path("b.jsonl")}).code, 0);
  ASSERT_EQ(call({"synth", "--seed", "2", "--turns", "10", "--out", path("c.jsonl")}).code, 0);
  EXPECT_EQ(slurp(path("a.jsonl")), slurp(path("b.jsonl")));
  EXPECT_NE(slurp(path("a.jsonl")), slurp(path("c.jsonl")));
  auto c = prosogate::corpus::load_corpus(path("a.jsonl"));
  EXPECT_EQ(c.turns.size(), 10u);
  EXPECT_EQ(c.provenance["tool_version"], prosogate::kToolVersion);
}

TEST_F(Cli, TrainScorePipeline) {
  ASSERT_EQ(call({"synth", "--turns", "30", "--out", path("s.jsonl")}).code, 0);
  auto t1 = call({"train", "--corpus", path("s.jsonl"), "--hidden", "8,4", "--epochs", "3", "--out", path("m1.json"),
                  "--format", "json"});
  ASSERT_EQ(t1.code, 0) << t1.err;
  EXPECT_EQ(nlohmann::json::parse(t1.out)["tool_version"], prosogate::kToolVersion);
  ASSERT_EQ(call({"train", "--corpus", path("s.jsonl"), "--hidden", "8,4", "--epochs", "3", "--out", path("m2.json")})
                .code,
            0);
  EXPECT_EQ(slurp(path("m1.json")), slurp(path("m2.json")));
  EXPECT_EQ(call({"train", "--corpus", path("s.jsonl"), "--hidden", "8,x", "--out", path("m3.json")}).code, 1);

  // pre-scored turns are left alone unless --overwrite is given
  auto kept = call({"score", "--corpus", path("s.jsonl"), "--classifier", path("m1.json"), "--out", path("k.jsonl")});
  ASSERT_EQ(kept.code, 0) << kept.err;
  EXPECT_EQ(slurp(path("k.jsonl")), slurp(path("s.jsonl")));
  ASSERT_EQ(call({"score", "--corpus", path("s.jsonl"), "--classifier", path("m1.json"), "--overwrite", "--out",
                  path("o.jsonl")})
                .code,
            0);
  auto scored = prosogate::corpus::load_corpus(path("o.jsonl"));
  auto orig = prosogate::corpus::load_corpus(path("s.jsonl"));
  EXPECT_NE(scored.turns[0].gap_scores, orig.turns[0].gap_scores);
  EXPECT_EQ(scored.turns[0].gap_scores->size(), scored.turns[0].words.size());

  auto s3 = call({"eval", "--task", "s3", "--gold", path("o.jsonl"), "--exclude-turn-final"});
  EXPECT_EQ(s3.code, 0);
  EXPECT_NE(s3.out.find("cases"), std::string::npos);
  auto s3c = call({"eval", "--task", "s3", "--gold", path("s.jsonl"), "--classifier", path("m1.json"), "--format",
                   "json"});
  ASSERT_EQ(s3c.code, 0) << s3c.err;
  EXPECT_TRUE(nlohmann::json::parse(s3c.out).contains("crosstab"));
}

TEST_F(Cli, ParseEvalRankBench) {
  auto p = call({"parse", "--grammar", grammar, "--corpus", demo, "--threshold", "0.01", "--out", path("r.json")});
  ASSERT_EQ(p.code, 0) << p.err;
  auto report = nlohmann::json::parse(slurp(path("r.json")));
  EXPECT_EQ(report["tool_version"], prosogate::kToolVersion);
  EXPECT_GE(report["turns"].size(), 20u);
  EXPECT_TRUE(report["turns"][0]["statistics"].contains("empty_edges"));

  auto e = call({"eval", "--gold", demo, "--proposed", path("r.json")});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("Recall"), std::string::npos);
  EXPECT_NE(e.out.find("Correct:"), std::string::npos);
  auto ej = call({"eval", "--gold", demo, "--threshold", "0.01", "--format", "json"});
  ASSERT_EQ(ej.code, 0);
  auto m = nlohmann::json::parse(ej.out);
  EXPECT_EQ(m["counts"]["miss"], 0);

  ASSERT_EQ(call({"synth", "--turns", "40", "--v2-only", "--out", path("v2.jsonl")}).code, 0);
  auto rk = call({"rank", "--corpus", path("v2.jsonl"), "--format", "json"});
  ASSERT_EQ(rk.code, 0) << rk.err;
  EXPECT_EQ(nlohmann::json::parse(rk.out)["histogram"]["total"], 40);
  EXPECT_EQ(call({"rank", "--corpus", demo, "--skip-invalid"}).code, 0);

  auto b = call({"bench", "--grammar", grammar, "--corpus", demo, "--threshold", "0.01", "--format", "json"});
  ASSERT_EQ(b.code, 0) << b.err;
  auto bj = nlohmann::json::parse(b.out);
  EXPECT_TRUE(bj["readings_identical"].get<bool>());
  EXPECT_TRUE(bj.contains("speedup"));
  auto bt = call({"bench", "--grammar", grammar, "--corpus", demo});
  EXPECT_NE(bt.out.find("Speedup"), std::string::npos);
}

TEST_F(Cli, ParseOutputIsReproducibleApartFromTiming) {
  auto strip = [](nlohmann::json j) {
    for (auto& t : j["turns"]) t["statistics"].erase("elapsed_ms");
    return j.dump();
  };
  ASSERT_EQ(call({"parse", "--grammar", grammar, "--corpus", demo, "--out", path("1.json")}).code, 0);
  ASSERT_EQ(call({"parse", "--grammar", grammar, "--corpus", demo, "--out", path("2.json")}).code, 0);
  EXPECT_EQ(strip(nlohmann::json::parse(slurp(path("1.json")))), strip(nlohmann::json::parse(slurp(path("2.json")))));
  auto rank = call({"parse", "--grammar", grammar, "--corpus", demo, "--rank", "2", "--format", "json"});
  ASSERT_EQ(rank.code, 0);
  EXPECT_EQ(nlohmann::json::parse(rank.out)["config"]["mode"], "rank");
}

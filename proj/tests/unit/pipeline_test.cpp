#include "sgc/pipeline.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "fixtures.hpp"
#include "gtest/gtest.h"

namespace sgc {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sgc_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& content) {
    auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

  int cli(const std::string& args) {
    std::string cmd = std::string(SGC_CLI_PATH) + " " + args + " >" + (dir_ / "stdout").string() + " 2>" +
                      (dir_ / "stderr").string();
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

TEST_F(PipelineTest, Demo6MatchesGoldenFiles) {
  PipelineOptions opts;
  opts.input_path = testing::source_path("data/demo6.jsonl");
  opts.out_dir = (dir_ / "out").string();
  auto result = run_pipeline(opts);
  const fs::path golden = testing::source_path("tests/data/golden/demo6");
  for (const char* name : {"graph.json", "graph.dot", "caption.txt", "g2t_request.json"}) {
    EXPECT_EQ(slurp(dir_ / "out" / name), slurp(golden / name)) << name;
  }
  EXPECT_TRUE(fs::exists(dir_ / "out" / "manifest.json"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "trace.jsonl"));
  EXPECT_EQ(result.record_count, 6u);
}

TEST_F(PipelineTest, Reproducible) {
  PipelineOptions opts;
  opts.input_path = testing::source_path("data/demo12.jsonl");
  opts.write_trace = true;
  opts.config.top_k = 1;
  opts.out_dir = (dir_ / "a").string();
  auto a = run_pipeline(opts);
  opts.out_dir = (dir_ / "b").string();
  auto b = run_pipeline(opts);
  for (const auto& name : a.written) {
    if (name == "manifest.json") continue;
    EXPECT_EQ(slurp(dir_ / "a" / name), slurp(dir_ / "b" / name)) << name;
  }
  auto ma = a.manifest, mb = b.manifest;
  ma.erase("timings_ms");
  mb.erase("timings_ms");
  ma["outputs"].erase("manifest.json");
  EXPECT_EQ(ma.dump(), mb.dump());
  EXPECT_TRUE(fs::exists(dir_ / "a" / "subgraph.json"));
  for (const auto& t : a.timings) EXPECT_GE(t.millis, 0.0);
}

TEST_F(PipelineTest, EmitTokensWritesOnlyRequest) {
  PipelineOptions opts;
  opts.input_path = testing::source_path("data/demo6.jsonl");
  opts.out_dir = dir_.string();
  opts.emit = EmitMode::kTokens;
  auto r = run_pipeline(opts);
  EXPECT_EQ(r.written, std::vector<std::string>{"g2t_request.json"});
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir_)) files += e.is_regular_file();
  EXPECT_EQ(files, 1u);
}

TEST_F(PipelineTest, MalformedLineReportsLineNumber) {
  auto in = write("bad.jsonl", "{\"segment_id\":\"a\",\"caption\":\"a dog\"}\nnot json\n");
  PipelineOptions opts;
  opts.input_path = in.string();
  opts.out_dir = (dir_ / "out").string();
  try {
    run_pipeline(opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(exit_code_for(e.code()), 2);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ExitCodeTest, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorCode::kInput), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::kMissingEmbedding), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::kConfig), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::kValidation), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::kIntegrity), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::kLoopGuard), 4);
  auto j = error_json(Error(ErrorCode::kConfig, "bad tau"));
  EXPECT_EQ(j["error"]["code"], error_code_name(ErrorCode::kConfig));
  EXPECT_EQ(j["error"]["exit_code"], 3);
}

TEST_F(PipelineTest, CliRunDefaults) {
  auto demo = testing::source_path("data/demo6.jsonl");
  ASSERT_EQ(cli("run --input " + demo + " --out-dir " + (dir_ / "out").string()), 0);
  EXPECT_EQ(slurp(dir_ / "out" / "caption.txt"), slurp(fs::path(testing::source_path("tests/data/golden/demo6")) / "caption.txt"));
}

TEST_F(PipelineTest, CliTauOutOfRangeIsConfigError) {
  auto demo = testing::source_path("data/demo6.jsonl");
  EXPECT_EQ(cli("run --input " + demo + " --out-dir " + dir_.string() + " --tau 1.1"), 3);
  auto err = nlohmann::json::parse(slurp(dir_ / "stderr"));
  EXPECT_EQ(err["error"]["exit_code"], 3);
  EXPECT_EQ(cli("run --input " + demo + " --emit everything"), 3);
  EXPECT_EQ(cli("run --bogus"), 3);
}

TEST_F(PipelineTest, CliMissingInputIsInputError) {
  EXPECT_EQ(cli("run --input " + (dir_ / "nope.jsonl").string() + " --out-dir " + dir_.string()), 2);
}

TEST_F(PipelineTest, CliEmitTokensAndShortPreset) {
  auto demo = testing::source_path("data/demo12.jsonl");
  ASSERT_EQ(cli("run --input " + demo + " --out-dir " + (dir_ / "t").string() + " --emit tokens --short"), 0);
  EXPECT_TRUE(fs::exists(dir_ / "t" / "g2t_request.json"));
  EXPECT_FALSE(fs::exists(dir_ / "t" / "graph.json"));
  EXPECT_FALSE(fs::exists(dir_ / "t" / "manifest.json"));
  auto req = nlohmann::json::parse(slurp(dir_ / "t" / "g2t_request.json"));
  EXPECT_EQ(req["params"]["beams"], 5);
  ASSERT_EQ(cli("run --input " + demo + " --out-dir " + (dir_ / "p").string() + " --emit tokens --paragraph"), 0);
  auto para = nlohmann::json::parse(slurp(dir_ / "p" / "g2t_request.json"));
  EXPECT_EQ(para["params"]["beams"], 3);
  EXPECT_GT(para["tokens"].size(), req["tokens"].size());
}

TEST_F(PipelineTest, CliFileProviderMissingEmbedding) {
  auto demo = testing::source_path("data/demo6.jsonl");
  auto vectors = testing::source_path("tests/data/fixture_embeddings.json");
  EXPECT_EQ(cli("run --input " + demo + " --out-dir " + dir_.string() + " --provider file:" + vectors), 2);
}

TEST_F(PipelineTest, CliWarningsGoToStderr) {
  auto in = write("w.jsonl", "{\"segment_id\":\"s9\",\"caption\":\"a dog runs. it is sunny\"}\n");
  ASSERT_EQ(cli("run --input " + in.string() + " --out-dir " + (dir_ / "o").string()), 0);
  auto w = nlohmann::json::parse(slurp(dir_ / "stderr"));
  EXPECT_EQ(w["segment_id"], "s9");
  EXPECT_EQ(w["clause"], "it is sunny");
}

TEST_F(PipelineTest, CliScore) {
  auto ref = write("ref.txt", "a man rides a horse");
  auto cand = write("cand.txt", "a man rides a horse");
  ASSERT_EQ(cli("score --reference " + ref.string() + " --candidate " + cand.string()), 0);
  auto j = nlohmann::json::parse(slurp(dir_ / "stdout"));
  EXPECT_EQ(j["P"], 1.0);
  EXPECT_EQ(j["R"], 1.0);
  EXPECT_EQ(j["F"], 1.0);
}

TEST_F(PipelineTest, CliParse) {
  ASSERT_EQ(cli("parse \"an elderly woman cooks in a kitchen\""), 0);
  auto g = graph_from_json(nlohmann::json::parse(slurp(dir_ / "stdout")));
  EXPECT_EQ(g.edges.size(), 1u);
}

}  // namespace
}  // namespace sgc

// sgc: consolidate per-segment video captions into one scene graph.
//
//   sgc run --input captions.jsonl --out-dir out [--tau 0.9] [--top-k 1]
//           [--provider hashed|file:<path>] [--emit graph|dot|tokens|caption|all]
//           [--trace] [--paragraph] [--short] [--config cfg.json]
//   sgc parse "a man rides a horse"
//   sgc score --reference ref.txt --candidate cand.txt [--vectors words.json]

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sgc/caption_parser.hpp"
#include "sgc/eval.hpp"
#include "sgc/pipeline.hpp"

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sgc::Error(sgc::ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

sgc::ProviderDescriptor parse_provider(const std::string& value) {
  sgc::ProviderDescriptor p;
  if (value == "hashed") return p;
  if (value.rfind("file:", 0) == 0 && value.size() > 5) {
    p.kind = sgc::ProviderKind::kFileBacked;
    p.path = value.substr(5);
    p.version = "file:" + p.path;
    return p;
  }
  throw sgc::Error(sgc::ErrorCode::kConfig, "provider must be \"hashed\" or \"file:<path>\", got \"" + value + "\"");
}

int fail(const sgc::Error& e) {
  std::cerr << sgc::error_json(e).dump() << "\n";
  return sgc::exit_code_for(e.code());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scene graph consolidation for long-video captioning"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Parse, consolidate, and realize a caption JSONL file");
  std::string input, out_dir = ".", provider = "hashed", emit = "all", config_path;
  std::optional<double> tau;
  std::optional<std::uint32_t> top_k;
  bool trace = false, paragraph = false, short_preset = false, manifest = false;
  run->add_option("--input", input, "Segment caption JSONL")->required();
  run->add_option("--out-dir", out_dir, "Output directory");
  run->add_option("--tau", tau, "Object match threshold in (0, 1] (default 0.9)");
  run->add_option("--top-k", top_k, "Extract the neighbourhood of the k most-merged nodes");
  run->add_option("--provider", provider, "Embedding provider: hashed | file:<path>");
  run->add_option("--emit", emit, "graph | dot | tokens | caption | all");
  run->add_option("--config", config_path, "JSON config with tau, top_k, provider.kind, provider.path");
  run->add_flag("--trace", trace, "Write trace.jsonl");
  run->add_flag("--paragraph", paragraph, "Use paragraph decoding parameters in the decoder request");
  run->add_flag("--short", short_preset, "Short-caption preset (top-k 1 unless --top-k is given)");
  run->add_flag("--manifest", manifest, "Write manifest.json for every emit mode");

  auto* parse = app.add_subcommand("parse", "Parse one caption and print its scene graph JSON");
  std::string caption;
  parse->add_option("caption", caption, "Caption text")->required();

  auto* score = app.add_subcommand("score", "Embedding P/R/F between two caption files");
  std::string reference, candidate, vectors;
  score->add_option("--reference", reference, "Reference caption file")->required();
  score->add_option("--candidate", candidate, "Candidate caption file")->required();
  score->add_option("--vectors", vectors, "JSON word -> vector table (default: hashed word vectors)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(sgc::Error(sgc::ErrorCode::kConfig, e.what()));
  }

  try {
    if (*run) {
      sgc::PipelineOptions opts;
      if (!config_path.empty()) opts.config = sgc::load_config(config_path);
      if (short_preset) opts.config.top_k = sgc::ConsolidationConfig::short_caption_preset().top_k;
      if (run->count("--provider")) opts.config.provider = parse_provider(provider);
      if (tau) opts.config.tau = *tau;
      if (top_k) {
        if (*top_k < 1) throw sgc::Error(sgc::ErrorCode::kConfig, "--top-k must be at least 1");
        opts.config.top_k = *top_k;
      }
      opts.input_path = input;
      opts.out_dir = out_dir;
      opts.emit = sgc::parse_emit_mode(emit);
      opts.write_trace = trace;
      opts.paragraph = paragraph;
      if (manifest) opts.write_manifest = true;
      auto result = sgc::run_pipeline(opts);
      for (const auto& w : result.warnings) std::cerr << sgc::to_json(w).dump() << "\n";
      for (const auto& name : result.written) std::cout << name << "\n";
      return 0;
    }
    if (*parse) {
      std::vector<sgc::SegmentWarning> warnings;
      auto graph = sgc::parse_segment(sgc::SegmentCaptionRecord{"cli", caption, 0}, &warnings);
      for (const auto& w : warnings) std::cerr << sgc::to_json(w).dump() << "\n";
      std::cout << sgc::to_json(graph).dump(2) << "\n";
      return 0;
    }
    if (*score) {
      std::unique_ptr<sgc::WordEmbedder> embedder;
      if (vectors.empty()) {
        embedder = std::make_unique<sgc::HashedWordEmbedder>();
      } else {
        embedder = std::make_unique<sgc::FileWordEmbedder>(sgc::FileWordEmbedder::load(vectors));
      }
      auto ref = sgc::embed_caption(read_text(reference), *embedder);
      auto cand = sgc::embed_caption(read_text(candidate), *embedder);
      std::cout << sgc::to_json(sgc::score_prf(ref, cand)).dump() << "\n";
      return 0;
    }
  } catch (const sgc::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(sgc::Error(sgc::ErrorCode::kIntegrity, e.what()));
  }
  return 0;
}

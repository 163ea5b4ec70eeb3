#include "sgc/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sgc/digest.hpp"

namespace sgc {
namespace {

namespace fs = std::filesystem;

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

  template <class F>
  decltype(auto) run(std::string stage, F&& f) {
    auto start = std::chrono::steady_clock::now();
    struct Record {
      StageClock* self;
      std::string stage;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        std::chrono::duration<double, std::milli> d = std::chrono::steady_clock::now() - start;
        self->sink_.push_back(StageTiming{std::move(stage), d.count()});
      }
    } record{this, std::move(stage), start};
    return f();
  }

 private:
  std::vector<StageTiming>& sink_;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

bool emits(EmitMode mode, EmitMode want) { return mode == EmitMode::kAll || mode == want; }

}  // namespace

EmitMode parse_emit_mode(std::string_view name) {
  if (name == "graph") return EmitMode::kGraph;
  if (name == "dot") return EmitMode::kDot;
  if (name == "tokens") return EmitMode::kTokens;
  if (name == "caption") return EmitMode::kCaption;
  if (name == "all") return EmitMode::kAll;
  throw Error(ErrorCode::kConfig, "unknown emit mode \"" + std::string(name) + "\"");
}

std::string_view emit_mode_name(EmitMode mode) {
  switch (mode) {
    case EmitMode::kGraph: return "graph";
    case EmitMode::kDot: return "dot";
    case EmitMode::kTokens: return "tokens";
    case EmitMode::kCaption: return "caption";
    case EmitMode::kAll: return "all";
  }
  return "unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInput:
    case ErrorCode::kIo:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kSizeLimit:
    case ErrorCode::kMissingEmbedding:
      return 2;
    case ErrorCode::kConfig:
    case ErrorCode::kValidation:
      return 3;
    case ErrorCode::kIntegrity:
    case ErrorCode::kDegenerateVector:
    case ErrorCode::kEmptyGraph:
    case ErrorCode::kInvalidScore:
    case ErrorCode::kLoopGuard:
      return 4;
  }
  return 4;
}

nlohmann::ordered_json error_json(const Error& error) {
  nlohmann::ordered_json j;
  j["error"]["code"] = error_code_name(error.code());
  j["error"]["message"] = error.what();
  j["error"]["exit_code"] = exit_code_for(error.code());
  return j;
}

PipelineResult run_pipeline(const PipelineOptions& options) {
  options.config.validate();
  const DecodeParams params = options.paragraph ? DecodeParams::paragraph() : DecodeParams::short_caption();
  params.validate();
  const bool write_manifest = options.write_manifest.value_or(options.emit == EmitMode::kAll);

  PipelineResult result;
  StageClock clock(result.timings);

  std::ifstream in(options.input_path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open input " + options.input_path);
  auto provider = make_provider(options.config.provider);

  Sha256Stream input_digest;
  std::vector<SceneGraph> graphs = clock.run("parse", [&] {
    std::vector<SceneGraph> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      input_digest.update(line);
      input_digest.update("\n");
      std::istringstream one(line);
      CaptionRecordReader reader(one);
      std::optional<SegmentCaptionRecord> record;
      try {
        record = reader.next();
      } catch (const Error& ex) {
        throw Error(ErrorCode::kInput, "line " + std::to_string(lineno) + ": " + ex.what());
      }
      if (!record) continue;
      try {
        out.push_back(parse_segment(*record, &result.warnings, options.parser));
      } catch (const Error& ex) {
        throw Error(ex.code(), "line " + std::to_string(lineno) + " (segment " + record->segment_id + "): " + ex.what());
      }
    }
    return out;
  });
  result.record_count = graphs.size();
  if (graphs.empty()) throw Error(ErrorCode::kInput, "input " + options.input_path + " contains no caption records");

  auto consolidated = clock.run("consolidate", [&] { return consolidate(graphs, options.config, *provider); });
  result.graph = std::move(consolidated.graph);
  result.trace = std::move(consolidated.trace);

  const SceneGraph* for_text = &result.graph;
  if (options.config.top_k) {
    result.subgraph = clock.run("extract", [&] { return extract_prioritized_subgraph(result.graph, *options.config.top_k); });
    for_text = &*result.subgraph;
  }

  clock.run("linearize", [&] {
    result.encoder_input = linearize(*for_text);
    result.decoder_request = export_decoder_request(result.encoder_input, params);
  });
  result.caption = clock.run("realize", [&] { return realize_template(*for_text); });

  std::vector<std::pair<std::string, std::string>> artifacts;
  if (emits(options.emit, EmitMode::kGraph)) {
    artifacts.emplace_back("graph.json", to_json(result.graph).dump(2) + "\n");
    if (result.subgraph) artifacts.emplace_back("subgraph.json", to_json(*result.subgraph).dump(2) + "\n");
  }
  if (emits(options.emit, EmitMode::kDot)) artifacts.emplace_back("graph.dot", to_dot(result.graph));
  if (emits(options.emit, EmitMode::kTokens)) {
    artifacts.emplace_back("g2t_request.json", result.decoder_request.dump(2) + "\n");
  }
  if (emits(options.emit, EmitMode::kCaption)) artifacts.emplace_back("caption.txt", result.caption + "\n");
  if (options.write_trace) artifacts.emplace_back("trace.jsonl", result.trace.to_jsonl());

  const fs::path out_dir(options.out_dir.empty() ? "." : options.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create output directory " + out_dir.string() + ": " + ec.message());

  nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
  clock.run("write", [&] {
    for (const auto& [name, content] : artifacts) {
      write_file(out_dir / name, content);
      outputs[name] = sha256_hex(content);
      result.written.push_back(name);
    }
  });

  auto& m = result.manifest;
  m["tool"] = "sgc";
  m["config"] = to_json(options.config);
  m["emit"] = emit_mode_name(options.emit);
  m["paragraph"] = options.paragraph;
  m["input"]["path"] = options.input_path;
  m["input"]["sha256"] = input_digest.hex();
  m["input"]["records"] = result.record_count;
  m["outputs"] = outputs;
  m["graph"]["objects"] = result.graph.objects.size();
  m["graph"]["edges"] = result.graph.edges.size();
  m["graph"]["merge_events"] = result.trace.events.size();
  m["graph"]["object_merges"] = result.trace.object_merge_count();
  m["warnings"] = result.warnings.size();
  // Wall-clock timings are the only non-reproducible field.
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
  for (const auto& t : result.timings) timings[t.stage] = t.millis;
  m["timings_ms"] = timings;
  if (write_manifest) {
    write_file(out_dir / "manifest.json", m.dump(2) + "\n");
    result.written.push_back("manifest.json");
  }
  return result;
}

}  // namespace sgc

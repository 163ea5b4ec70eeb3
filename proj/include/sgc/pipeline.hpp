#pragma once

// End-to-end run: caption JSONL -> per-segment graphs -> consolidated graph ->
// optional prioritized subgraph -> encoder input, decoder request, and
// template caption.

#include <optional>
#include <string>
#include <vector>

#include "sgc/caption_parser.hpp"
#include "sgc/consolidation.hpp"
#include "sgc/error.hpp"
#include "sgc/g2t.hpp"

namespace sgc {

enum class EmitMode { kGraph, kDot, kTokens, kCaption, kAll };

/// Throws kConfig for unknown names.
EmitMode parse_emit_mode(std::string_view name);
std::string_view emit_mode_name(EmitMode mode);

struct PipelineOptions {
  ConsolidationConfig config;
  std::string input_path;
  std::string out_dir;
  EmitMode emit = EmitMode::kAll;
  bool write_trace = false;
  bool paragraph = false;
  /// Defaults to writing the manifest only for EmitMode::kAll.
  std::optional<bool> write_manifest;
  ParserOptions parser;
};

struct StageTiming {
  std::string stage;
  double millis = 0.0;
};

struct PipelineResult {
  SceneGraph graph;
  std::optional<SceneGraph> subgraph;
  MergeTrace trace;
  GraphEncoderInput encoder_input;
  nlohmann::ordered_json decoder_request;
  std::string caption;
  std::vector<SegmentWarning> warnings;
  std::vector<std::string> written;  // file names relative to out_dir
  std::vector<StageTiming> timings;
  nlohmann::ordered_json manifest;
  std::size_t record_count = 0;
};

/// Throws sgc::Error; see exit_code_for for the status a CLI should return.
PipelineResult run_pipeline(const PipelineOptions& options);

/// 2 input error, 3 configuration error, 4 internal invariant violation.
int exit_code_for(ErrorCode code);

nlohmann::ordered_json error_json(const Error& error);

}  // namespace sgc

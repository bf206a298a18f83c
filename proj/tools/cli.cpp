// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "pipeline_config.hpp"
#include "vmr/ablation.hpp"
#include "vmr/caption_pipeline.hpp"
#include "vmr/caption_store.hpp"
#include "vmr/error.hpp"
#include "vmr/eval.hpp"
#include "vmr/http_provider.hpp"
#include "vmr/modulation.hpp"
#include "vmr/records_io.hpp"
#include "vmr/sequence.hpp"
#include "vmr/svc.hpp"
#include "vmr/synthetic.hpp"
#include "vmr/trace_io.hpp"

namespace vmr::cli {
namespace {

inline constexpr std::string_view kDefaultInstruction =
    "Find the start and end time, in seconds, of the moment described by the query.";

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
};

void add_common(CLI::App& cmd, Common& c) {
  cmd.add_option("--config", c.config, "Config file of `key = value` lines; flags override it");
  cmd.add_option("--seed", c.seed, "Seed for every random choice (overrides config `seed`)");
  cmd.add_option("--out", c.out, "Output path (default: stdout)");
  cmd.add_flag("--quiet", c.quiet, "Suppress summaries on stderr");
}

PipelineConfig load_config(const Common& c) {
  PipelineConfig cfg;
  if (!c.config.empty()) cfg.merge_file(c.config);
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

std::ifstream open_input(const std::string& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, fmt::format("cannot open {} '{}'", what, path));
  return in;
}

void write_output(const std::string& path, std::ostream& fallback,
                  const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  // Buffer first so a failed command leaves no partial file.
  std::ostringstream buf;
  fn(buf);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::kIo, fmt::format("cannot write '{}'", path));
  file << buf.str();
  if (!file.flush()) throw Error(ErrorKind::kIo, fmt::format("failed writing '{}'", path));
}

std::string require_path(const std::string& path, std::string_view flag) {
  if (path.empty()) throw Error(ErrorKind::kConfig, fmt::format("{} is required", flag));
  return path;
}

EmbeddingVector read_embedding_file(const std::string& path) {
  auto in = open_input(path, "query embedding");
  nlohmann::json j;
  try {
    in >> j;
    return EmbeddingVector(j.get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, fmt::format("{}: expected a JSON array of reals ({})", path, e.what()));
  }
}

// ---- provider selection --------------------------------------------------

struct ProviderFlags {
  std::string provider = "mock";
  double timeout_sec = 30.0;
  int retries = 2;
  std::size_t concurrency = 1;
  double mock_yes_rate = 0.5;
};

void add_provider_flags(CLI::App& cmd, ProviderFlags& p) {
  cmd.add_option("--provider", p.provider,
                 "`mock` (deterministic hash provider) or an http:// endpoint")
      ->capture_default_str();
  cmd.add_option("--timeout", p.timeout_sec, "HTTP provider timeout per request, seconds")
      ->capture_default_str();
  cmd.add_option("--retries", p.retries, "HTTP provider retries after a failed request")
      ->capture_default_str();
  cmd.add_option("--concurrency", p.concurrency, "HTTP provider requests in flight")
      ->capture_default_str();
  cmd.add_option("--mock-yes-rate", p.mock_yes_rate, "Mock provider probability of a yes answer")
      ->capture_default_str();
}

std::unique_ptr<Provider> make_provider(const ProviderFlags& p, std::size_t dimension, std::uint64_t seed) {
  if (p.provider == "mock") {
    if (!(p.mock_yes_rate >= 0.0 && p.mock_yes_rate <= 1.0)) {
      throw Error(ErrorKind::kConfig, "--mock-yes-rate must be in [0, 1]");
    }
    return std::make_unique<HashProvider>(dimension, seed, p.mock_yes_rate);
  }
  if (p.concurrency == 0) throw Error(ErrorKind::kConfig, "--concurrency must be >= 1");
  return std::make_unique<HttpProvider>(
      HttpProviderOptions{p.provider, p.timeout_sec, p.retries, p.concurrency});
}

EmbeddingVector query_embedding(const std::string& query, const std::string& embedding_file,
                                const ProviderFlags& p, std::size_t dimension, std::uint64_t seed) {
  if (!embedding_file.empty()) return read_embedding_file(embedding_file);
  if (query.empty()) throw Error(ErrorKind::kEmptyQuery, "--query or --query-embedding is required");
  auto provider = make_provider(p, dimension, seed);
  return ask_embedding(*provider, {RequestKind::kEmbedText, std::nullopt, query, std::nullopt, std::nullopt});
}

// ---- commands ------------------------------------------------------------

struct GenTraceArgs {
  PlateauTraceSpec spec;
};

void gen_trace(const Common& c, GenTraceArgs& a, std::ostream& out) {
  const PipelineConfig cfg = load_config(c);
  a.spec.seed = cfg.seed;
  const Trace trace = generate_plateau_trace(a.spec);
  write_output(c.out, out, [&](std::ostream& s) { write_trace(s, trace); });
}

struct CompressArgs {
  std::string trace;
  std::string report;
  std::optional<double> theta;
  std::optional<int> rank_k;
};

void compress(const Common& c, const CompressArgs& a, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg = load_config(c);
  if (a.theta) cfg.svc.theta = *a.theta;
  if (a.rank_k) cfg.svc.rank_k = *a.rank_k;
  cfg.validate();
  const std::string out_path = require_path(c.out, "--out");
  Trace trace = read_trace_file(require_path(a.trace, "--trace"));
  auto [compressed, report] = compress_sequence(trace.sequence, cfg.svc);
  trace.sequence = std::move(compressed);
  write_trace_file(out_path, trace);
  if (!a.report.empty()) {
    write_output(a.report, out, [&](std::ostream& s) { s << report.to_json() << '\n'; });
  } else {
    out << report.to_json() << '\n';
  }
  if (!c.quiet) {
    err << fmt::format("compressed {} frames to {} ({} merges)\n", report.input_count,
                       report.output_count, report.merges.size());
  }
}

struct CaptionArgs {
  std::string trace;
  std::string query;
  std::optional<std::string> mode;
  std::optional<std::string> aggregation;
  std::optional<double> interval;
  std::string store;
  std::string precompute_store;
  std::string source_id;
  std::string latency;
  bool parse_with_provider = false;
  ProviderFlags provider;
};

void caption(const Common& c, const CaptionArgs& a, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg = load_config(c);
  if (a.mode) cfg.mode = parse_caption_mode(*a.mode);
  if (a.aggregation) cfg.aggregation = parse_relevance_aggregation(*a.aggregation);
  if (a.interval) cfg.caption_interval_sec = *a.interval;
  cfg.validate();

  const Trace trace = read_trace_file(require_path(a.trace, "--trace"));
  const std::string source_id = a.source_id.empty() ? trace.header.source_id : a.source_id;
  const auto segments = segment_video(trace.sequence.duration, cfg.caption_interval_sec, trace.sequence);
  auto provider = make_provider(a.provider, trace.header.dimension, cfg.seed);

  if (!a.precompute_store.empty()) {
    const CaptionStore store = precompute_caption_store(segments, source_id, *provider);
    write_output(a.precompute_store, out, [&](std::ostream& s) { store.write(s); });
    if (!c.quiet) err << fmt::format("stored {} generic captions for {}\n", store.size(), source_id);
    return;
  }

  const QueryIntent intent =
      a.parse_with_provider ? parse_query_via_provider(a.query, *provider) : parse_query(a.query);
  std::optional<CaptionStore> store;
  if (cfg.mode == CaptionMode::kLatencyEfficient) {
    if (a.store.empty()) throw Error(ErrorKind::kStoreMissing, "LE mode needs --store");
    store = CaptionStore::load(a.store);
  }
  const CaptionOptions options{cfg.mode, cfg.aggregation, source_id, store ? &*store : nullptr};
  const CaptionRun run = generate_captions(segments, intent, *provider, options);

  write_output(c.out, out, [&](std::ostream& s) { write_caption_records(s, run.records); });
  if (!a.latency.empty()) {
    write_output(a.latency, out, [&](std::ostream& s) {
      nlohmann::json j = nlohmann::json::object();
      for (const auto& [stage, lat] : run.latency) j[stage] = {{"calls", lat.calls}, {"total_sec", lat.total_sec}};
      s << j.dump() << '\n';
    });
  }
  for (const auto& f : run.failures) {
    err << fmt::format("segment {}: fell back to generic caption: {}\n", f.segment_id, f.message);
  }
  if (!c.quiet) {
    const auto guided = std::count_if(run.records.begin(), run.records.end(), [](const CaptionRecord& r) {
      return r.path == CaptionPath::kQueryGuided;
    });
    err << fmt::format("{} segments, {} query-guided, mode {}\n", run.records.size(), guided,
                       to_string(cfg.mode));
  }
}

struct ModulateArgs {
  std::string trace;
  std::string captions;
  std::string query;
  std::string query_embedding;
  std::optional<double> alpha1;
  std::optional<double> alpha2;
  std::optional<std::string> vbar_form;
  ProviderFlags provider;
};

void modulate(const Common& c, const ModulateArgs& a, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg = load_config(c);
  if (a.alpha1) cfg.modulation.alpha1 = *a.alpha1;
  if (a.alpha2) cfg.modulation.alpha2 = *a.alpha2;
  if (a.vbar_form) cfg.modulation.refined_form = parse_refined_form(*a.vbar_form);
  cfg.validate();

  const Trace trace = read_trace_file(require_path(a.trace, "--trace"));
  auto in = open_input(require_path(a.captions, "--captions"), "caption file");
  const auto records = read_caption_records(in);
  const EmbeddingVector q =
      query_embedding(a.query, a.query_embedding, a.provider, trace.header.dimension, cfg.seed);
  const auto scored = modulate_captions(trace.sequence, records, q, cfg.modulation);
  write_output(c.out, out, [&](std::ostream& s) { write_scored_captions(s, scored); });
  if (!c.quiet) err << fmt::format("scored {} captions\n", scored.size());
}

struct AssembleArgs {
  std::string trace;
  std::string scored;
  std::string query;
  std::string instruction{kDefaultInstruction};
  std::optional<std::size_t> max_vector_slots;
};

void assemble_cmd(const Common& c, const AssembleArgs& a, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg = load_config(c);
  if (a.max_vector_slots) cfg.max_vector_slots = *a.max_vector_slots;
  cfg.validate();
  const std::string manifest_path = require_path(c.out, "--out");
  if (a.query.empty()) throw Error(ErrorKind::kEmptyQuery, "--query is required");

  const Trace trace = read_trace_file(require_path(a.trace, "--trace"));
  std::vector<ScoredCaption> scored;
  if (!a.scored.empty()) {
    auto in = open_input(a.scored, "scored caption file");
    scored = read_scored_captions(in);
  }
  MemoryBudget budget;
  budget.max_vector_slots = cfg.max_vector_slots;
  const InterleavedSequence seq = assemble(trace.sequence, scored, a.query, a.instruction, budget);

  const std::string sidecar_path = manifest_path + ".f32";
  const std::string sidecar_name = std::filesystem::path(sidecar_path).filename().string();
  std::ostringstream manifest, sidecar;
  write_manifest(seq, manifest, sidecar, sidecar_name);
  write_output(manifest_path, out, [&](std::ostream& s) { s << manifest.str(); });
  write_output(sidecar_path, out, [&](std::ostream& s) { s << sidecar.str(); });

  const MemoryBudget used = footprint(seq);
  out << nlohmann::json{{"slots", seq.slots.size()},
                        {"used_vector_slots", used.used_vector_slots},
                        {"used_text_chars", used.used_text_chars}}
             .dump()
      << '\n';
  if (!c.quiet) err << fmt::format("wrote {} and {}\n", manifest_path, sidecar_path);
}

struct EvalArgs {
  std::string predictions;
  std::string ground_truth;
  std::vector<double> r1{0.5, 0.7};
  std::vector<double> map{0.5, 0.75};
};

void eval_cmd(const Common& c, const EvalArgs& a, std::ostream& out) {
  load_config(c);
  auto pin = open_input(require_path(a.predictions, "--predictions"), "prediction file");
  auto gin = open_input(require_path(a.ground_truth, "--ground-truth"), "ground-truth file");
  const auto preds = read_moment_entries(pin);
  const auto gts = read_moment_entries(gin);
  const AlignedMoments aligned = align_moments(preds, gts);
  const EvalResult result = evaluate(aligned.predictions, aligned.ground_truth, a.r1, a.map);
  write_output(c.out, out, [&](std::ostream& s) { s << result.to_json() << '\n'; });
}

struct AblateArgs {
  std::string trace;
  std::vector<std::string> strategies{"frame_selection", "average_pooling", "svd"};
  std::optional<std::size_t> query_frame;
  std::string query_embedding;
  std::vector<double> gt;
  std::size_t top_k = 5;
  std::optional<double> theta;
  std::optional<int> rank_k;
};

void ablate(const Common& c, const AblateArgs& a, std::ostream& out) {
  PipelineConfig cfg = load_config(c);
  if (a.theta) cfg.svc.theta = *a.theta;
  if (a.rank_k) cfg.svc.rank_k = *a.rank_k;
  cfg.validate();

  std::vector<CompressionStrategy> strategies;
  for (const auto& name : a.strategies) strategies.push_back(parse_compression_strategy(name));
  const Trace trace = read_trace_file(require_path(a.trace, "--trace"));
  const auto& frames = trace.sequence.frames;

  // Default query: the first frame of the middle planted plateau, with that
  // plateau's time span as ground truth.
  std::size_t qf = 0;
  std::optional<PlateauRange> plateau;
  if (a.query_frame) {
    qf = *a.query_frame;
  } else if (!trace.header.plateaus.empty()) {
    qf = trace.header.plateaus[trace.header.plateaus.size() / 2].first;
  }
  if (qf >= frames.size()) {
    throw Error(ErrorKind::kConfig, fmt::format("--query-frame {} is outside the trace", qf));
  }
  for (const auto& p : trace.header.plateaus) {
    if (p.first <= qf && qf <= p.last) plateau = p;
  }

  std::vector<TemporalSegment> gt;
  if (!a.gt.empty()) {
    if (a.gt.size() != 2) throw Error(ErrorKind::kConfig, "--gt takes START,END");
    gt.push_back({a.gt[0], a.gt[1]});
  } else if (plateau) {
    const double end = plateau->last + 1 < frames.size() ? frames[plateau->last + 1].timestamp
                                                         : trace.sequence.duration;
    gt.push_back({frames[plateau->first].timestamp, end});
  } else {
    throw Error(ErrorKind::kConfig, "trace has no planted plateaus; pass --gt START,END");
  }
  gt.front().validate();

  const EmbeddingVector q =
      a.query_embedding.empty() ? frames[qf].embedding : read_embedding_file(a.query_embedding);
  const auto rows = run_ablation(trace.sequence, gt, q, strategies, AblationConfig{cfg.svc, a.top_k});
  write_output(c.out, out, [&](std::ostream& s) { write_comparison_table(s, rows); });
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Video moment retrieval pipeline: synthetic traces, compression, captioning, "
               "modulation, sequence assembly, evaluation and ablation.",
               "vmr"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Help for every command");

  Common common;
  GenTraceArgs gen;
  CompressArgs comp;
  CaptionArgs cap;
  ModulateArgs mod;
  AssembleArgs asm_args;
  EvalArgs ev;
  AblateArgs abl;

  auto* gen_cmd = app.add_subcommand("gen-trace", "Write a synthetic plateau trace");
  add_common(*gen_cmd, common);
  gen_cmd->add_option("--frames", gen.spec.frames, "Number of frames")->capture_default_str();
  gen_cmd->add_option("--dim", gen.spec.dimension, "Embedding dimension")->capture_default_str();
  gen_cmd->add_option("--plateaus", gen.spec.plateaus, "Number of planted plateaus")->capture_default_str();
  gen_cmd->add_option("--noise", gen.spec.noise, "Per-frame noise norm (0 = exact duplicates)")
      ->capture_default_str();
  gen_cmd->add_option("--jitter", gen.spec.magnitude_jitter, "Relative magnitude jitter per frame")
      ->capture_default_str();
  gen_cmd->add_option("--interval", gen.spec.frame_interval, "Seconds between frames")->capture_default_str();
  gen_cmd->add_option("--source-id", gen.spec.source_id, "Source id in the trace header")
      ->capture_default_str();

  auto* comp_cmd = app.add_subcommand("compress", "Merge redundant frames of a trace");
  add_common(*comp_cmd, common);
  comp_cmd->add_option("--trace", comp.trace, "Input trace")->required();
  comp_cmd->add_option("--theta", comp.theta, "Similarity threshold (config `theta`, default 0.95)");
  comp_cmd->add_option("--rank-k", comp.rank_k, "Truncation rank, 1 or 2 (config `rank_k`)");
  comp_cmd->add_option("--report", comp.report, "Write the compression report here instead of stdout");

  auto* cap_cmd = app.add_subcommand("caption", "Generate query-guided / generic captions per segment");
  add_common(*cap_cmd, common);
  cap_cmd->add_option("--trace", cap.trace, "Input trace")->required();
  cap_cmd->add_option("--query", cap.query, "Retrieval query");
  cap_cmd->add_option("--mode", cap.mode, "SE or LE (config `mode`)");
  cap_cmd->add_option("--aggregation", cap.aggregation, "any or all (config `relevance_aggregation`)");
  cap_cmd->add_option("--interval", cap.interval, "Segment length, seconds (config `caption_interval_sec`)");
  cap_cmd->add_option("--store", cap.store, "Caption store for LE mode");
  cap_cmd->add_option("--precompute-store", cap.precompute_store,
                      "Build the LE caption store at this path and exit");
  cap_cmd->add_option("--source-id", cap.source_id, "Store key (default: trace source id)");
  cap_cmd->add_option("--latency", cap.latency, "Write per-stage latency JSON here");
  cap_cmd->add_flag("--parse-with-provider", cap.parse_with_provider,
                    "Ask the provider to extract objects and actions from the query");
  add_provider_flags(*cap_cmd, cap.provider);

  auto* mod_cmd = app.add_subcommand("modulate", "Score captions against the query and rescale them");
  add_common(*mod_cmd, common);
  mod_cmd->add_option("--trace", mod.trace, "Trace the captions were made from")->required();
  mod_cmd->add_option("--captions", mod.captions, "Caption records from `caption`")->required();
  mod_cmd->add_option("--query", mod.query, "Query text, embedded by the provider");
  mod_cmd->add_option("--query-embedding", mod.query_embedding, "JSON array used as the query embedding");
  mod_cmd->add_option("--alpha1", mod.alpha1, "Visual-query weight (config `alpha1`, default 0.7)");
  mod_cmd->add_option("--alpha2", mod.alpha2, "Refined caption weight (config `alpha2`, default 0.3)");
  mod_cmd->add_option("--vbar-form", mod.vbar_form, "product, mean or min (config `vbar_form`)");
  add_provider_flags(*mod_cmd, mod.provider);

  auto* asm_cmd = app.add_subcommand("assemble", "Write the interleaved sequence manifest and sidecar");
  add_common(*asm_cmd, common);
  asm_cmd->add_option("--trace", asm_args.trace, "Frames to interleave")->required();
  asm_cmd->add_option("--scored", asm_args.scored, "Scored captions from `modulate`");
  asm_cmd->add_option("--query", asm_args.query, "Retrieval query")->required();
  asm_cmd->add_option("--instruction", asm_args.instruction, "Instruction text")->capture_default_str();
  asm_cmd->add_option("--max-vector-slots", asm_args.max_vector_slots,
                      "Vector slot budget (config `max_vector_slots`)");

  auto* ev_cmd = app.add_subcommand("eval", "Score moment predictions against ground truth");
  add_common(*ev_cmd, common);
  ev_cmd->add_option("--predictions", ev.predictions, "Prediction lines {query_id,start,end,confidence}")
      ->required();
  ev_cmd->add_option("--ground-truth", ev.ground_truth, "Ground-truth lines {query_id,start,end}")
      ->required();
  ev_cmd->add_option("--r1", ev.r1, "R1 IoU thresholds")->delimiter(',')->capture_default_str();
  ev_cmd->add_option("--map", ev.map, "mAP IoU thresholds")->delimiter(',')->capture_default_str();

  auto* abl_cmd = app.add_subcommand("ablate", "Compare frame selection, average pooling and SVD");
  add_common(*abl_cmd, common);
  abl_cmd->add_option("--trace", abl.trace, "Input trace")->required();
  abl_cmd->add_option("--strategies", abl.strategies, "Strategies to compare")
      ->delimiter(',')
      ->capture_default_str();
  abl_cmd->add_option("--query-frame", abl.query_frame,
                      "Use this frame's embedding as the query (default: middle plateau start)");
  abl_cmd->add_option("--query-embedding", abl.query_embedding, "JSON array used as the query embedding");
  abl_cmd->add_option("--gt", abl.gt, "Ground-truth span START,END (default: query frame's plateau)")
      ->delimiter(',');
  abl_cmd->add_option("--top-k", abl.top_k, "Proxy predictions per query")->capture_default_str();
  abl_cmd->add_option("--theta", abl.theta, "Similarity threshold (config `theta`)");
  abl_cmd->add_option("--rank-k", abl.rank_k, "Truncation rank (config `rank_k`)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "vmr: usage error: " << e.what() << "\nRun with --help for the list of flags.\n";
    return kUsageError;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    if (cmd == gen_cmd) gen_trace(common, gen, out);
    if (cmd == comp_cmd) compress(common, comp, out, err);
    if (cmd == cap_cmd) caption(common, cap, out, err);
    if (cmd == mod_cmd) modulate(common, mod, out, err);
    if (cmd == asm_cmd) assemble_cmd(common, asm_args, out, err);
    if (cmd == ev_cmd) eval_cmd(common, ev, out);
    if (cmd == abl_cmd) ablate(common, abl, out);
  } catch (const Error& e) {
    err << "vmr " << cmd->get_name() << ": " << e.what() << '\n';
    return kModuleError;
  } catch (const std::exception& e) {
    err << "vmr " << cmd->get_name() << ": internal error: " << e.what() << '\n';
    return kModuleError;
  }
  return kOk;
}

}  // namespace vmr::cli

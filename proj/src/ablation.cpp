// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/ablation.hpp"

#include <algorithm>
#include <array>
#include <ostream>

#include <fmt/format.h>

#include "vmr/error.hpp"
#include "vmr/trace_io.hpp"

namespace vmr {
namespace {

EmbeddingVector reduce_pair(CompressionStrategy strategy, const EmbeddingVector& anchor,
                            const EmbeddingVector& frame, const SvcConfig& cfg) {
  switch (strategy) {
    case CompressionStrategy::kFrameSelection:
      return anchor;
    case CompressionStrategy::kAveragePooling: {
      std::vector<double> mean(anchor.dimension());
      for (std::size_t i = 0; i < mean.size(); ++i) mean[i] = 0.5 * (anchor[i] + frame[i]);
      return EmbeddingVector(std::move(mean));
    }
    case CompressionStrategy::kSvd:
      return compress_pair(anchor, frame, cfg);
  }
  return anchor;
}

struct Span {
  std::size_t first;
  std::size_t last;
  double score;
};

}  // namespace

std::string_view to_string(CompressionStrategy strategy) noexcept {
  switch (strategy) {
    case CompressionStrategy::kFrameSelection: return "frame_selection";
    case CompressionStrategy::kAveragePooling: return "average_pooling";
    case CompressionStrategy::kSvd: return "svd";
  }
  return "svd";
}

CompressionStrategy parse_compression_strategy(std::string_view name) {
  for (auto s : {CompressionStrategy::kFrameSelection, CompressionStrategy::kAveragePooling,
                 CompressionStrategy::kSvd}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorKind::kConfig, fmt::format("unknown compression strategy '{}'", name));
}

double pair_reconstruction_error(CompressionStrategy strategy, const EmbeddingVector& anchor,
                                 const EmbeddingVector& frame, int rank_k) {
  require_same_dimension(anchor, frame);
  double err = 0.0;
  switch (strategy) {
    case CompressionStrategy::kFrameSelection:
      // The dropped frame is represented by the anchor.
      for (std::size_t i = 0; i < anchor.dimension(); ++i) {
        const double d = frame[i] - anchor[i];
        err += d * d;
      }
      return err;
    case CompressionStrategy::kAveragePooling:
      // |a - m|^2 + |b - m|^2 with m = (a + b) / 2
      for (std::size_t i = 0; i < anchor.dimension(); ++i) {
        const double d = frame[i] - anchor[i];
        err += 0.5 * d * d;
      }
      return err;
    case CompressionStrategy::kSvd:
      return truncated_svd_rank_k({anchor, frame}, rank_k).discarded_energy;
  }
  return err;
}

std::vector<MomentPrediction> proxy_predict(const FrameSequence& slots, const EmbeddingVector& query,
                                            std::size_t top_k) {
  if (slots.empty()) throw Error(ErrorKind::kEmptyInput, "proxy predictor needs at least one slot");
  if (top_k == 0) throw Error(ErrorKind::kConfig, "proxy top_k must be >= 1");
  const std::size_t n = slots.size();

  std::vector<double> centered(n);
  double mean = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    centered[j] = cosine_similarity(slots.frames[j].embedding, query);
    mean += centered[j];
  }
  mean /= static_cast<double>(n);
  for (double& s : centered) s -= mean;

  auto slot_end = [&](std::size_t j) {
    return j + 1 < n ? slots.frames[j + 1].timestamp : slots.duration;
  };

  std::vector<Span> spans;
  spans.reserve(n * (n + 1) / 2);
  for (std::size_t first = 0; first < n; ++first) {
    double score = 0.0;
    for (std::size_t last = first; last < n; ++last) {
      score += centered[last];
      if (slot_end(last) > slots.frames[first].timestamp) spans.push_back({first, last, score});
    }
  }
  if (spans.empty()) throw Error(ErrorKind::kEmptyInput, "no slot span has positive length");

  const std::size_t keep = std::min(top_k, spans.size());
  std::partial_sort(spans.begin(), spans.begin() + static_cast<std::ptrdiff_t>(keep), spans.end(),
                    [](const Span& a, const Span& b) {
                      if (a.score != b.score) return a.score > b.score;
                      if (a.first != b.first) return a.first < b.first;
                      return a.last < b.last;
                    });
  std::vector<MomentPrediction> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back({{slots.frames[spans[i].first].timestamp, slot_end(spans[i].last)}, spans[i].score});
  }
  return out;
}

std::vector<AblationRow> run_ablation(const FrameSequence& trace,
                                      std::span<const TemporalSegment> ground_truth,
                                      const EmbeddingVector& query,
                                      std::span<const CompressionStrategy> strategies,
                                      const AblationConfig& cfg) {
  cfg.svc.validate();
  if (trace.empty()) throw Error(ErrorKind::kEmptyInput, "cannot ablate an empty trace");
  if (strategies.empty()) throw Error(ErrorKind::kConfig, "no compression strategies given");
  if (ground_truth.empty()) throw Error(ErrorKind::kEmptyInput, "ablation needs ground truth");
  trace.validate();

  std::vector<AblationRow> rows(strategies.size());
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    rows[s].strategy = strategies[s];
    rows[s].input_frames = trace.size();
    rows[s].compressed.duration = trace.duration;
    rows[s].compressed.frames.push_back(trace.frames.front());
  }

  // Reference walk: identical to compress_sequence, and the source of the
  // redundant pairs every strategy is scored on.
  FrameRecord walk_slot = trace.frames.front();
  EmbeddingVector anchor = walk_slot.embedding;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const FrameRecord& frame = trace.frames[i];
    if (!(cosine_similarity(anchor, frame.embedding) > cfg.svc.theta)) {
      walk_slot = frame;
      anchor = frame.embedding;
      for (auto& row : rows) row.compressed.frames.push_back(frame);
      continue;
    }
    const TimeSpan absorbed = frame.merged_span.value_or(TimeSpan{frame.timestamp, frame.timestamp});
    for (auto& row : rows) {
      FrameRecord& slot = row.compressed.frames.back();
      row.reconstruction_error +=
          pair_reconstruction_error(row.strategy, walk_slot.embedding, frame.embedding, cfg.svc.rank_k);
      slot.embedding = reduce_pair(row.strategy, walk_slot.embedding, frame.embedding, cfg.svc);
      TimeSpan span = slot.merged_span.value_or(TimeSpan{slot.timestamp, slot.timestamp});
      span.start = std::min(span.start, absorbed.start);
      span.end = std::max(span.end, absorbed.end);
      slot.merged_span = span;
      row.merges += 1;
    }
    walk_slot.embedding = compress_pair(walk_slot.embedding, frame.embedding, cfg.svc);
    if (cfg.svc.anchor_update == AnchorUpdate::kCompressed) anchor = walk_slot.embedding;
  }

  const GroundTruthSet gts{std::vector<TemporalSegment>(ground_truth.begin(), ground_truth.end())};
  for (auto& row : rows) {
    row.output_slots = row.compressed.size();
    const PredictionSet preds{proxy_predict(row.compressed, query, cfg.proxy_top_k)};
    row.metrics = evaluate(preds, gts);
  }
  return rows;
}

void write_comparison_table(std::ostream& out, std::span<const AblationRow> rows) {
  out << "strategy\tinput_frames\toutput_slots\tmerges\treconstruction_error\t"
         "R1@0.5\tR1@0.7\tmAP@0.5\tmAP@0.75\tmAP_avg\tmIoU\n";
  for (const AblationRow& row : rows) {
    const auto& m = row.metrics;
    auto at = [](const std::map<double, double>& values, double key) {
      auto it = values.find(key);
      return it == values.end() ? 0.0 : it->second;
    };
    out << to_string(row.strategy) << '\t' << row.input_frames << '\t' << row.output_slots << '\t'
        << row.merges << '\t' << format_real(row.reconstruction_error) << '\t'
        << fmt::format("{:.4f}\t{:.4f}\t{:.4f}\t{:.4f}\t{:.4f}\t{:.4f}", at(m.r1_at, 0.5),
                       at(m.r1_at, 0.7), at(m.map_at, 0.5), at(m.map_at, 0.75), m.map_avg, m.miou)
        << '\n';
  }
}

}  // namespace vmr

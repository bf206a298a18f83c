// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmr/caption_store.hpp"
#include "vmr/captions.hpp"
#include "vmr/provider.hpp"
#include "vmr/query_parser.hpp"

namespace vmr {

inline constexpr std::string_view kRelevancePrompt = "Does this object/action appear in the scene?";
inline constexpr std::string_view kQueryGuidedPrompt = "Generate a caption that is relevant to the query";
inline constexpr std::string_view kGenericPrompt = "Generate a caption describing the scene";
inline constexpr std::string_view kParsePrompt =
    "List the objects and actions in the query as 'objects: ...; actions: ...'";

enum class CaptionMode {
  kStorageEfficient,  // SE: every caption generated on demand
  kLatencyEfficient,  // LE: stored generic captions, re-caption relevant segments only
};

enum class RelevanceAggregation { kAny, kAll };

std::string_view to_string(CaptionMode mode) noexcept;
CaptionMode parse_caption_mode(std::string_view text);
std::string_view to_string(RelevanceAggregation aggregation) noexcept;
RelevanceAggregation parse_relevance_aggregation(std::string_view text);

/// Query parsing delegated to the provider (kParseQuery request). The answer
/// is normalized exactly like the lexicon path.
QueryIntent parse_query_via_provider(std::string_view raw, Provider& provider);

/// Splits [0, duration) into ceil(duration / interval) segments, the last one
/// truncated at duration. Each segment's representative frame is the frame
/// nearest its midpoint (ties to the earlier frame).
std::vector<SceneSegment> segment_video(double duration, double interval, const FrameSequence& frames);

/// Asks one yes/no question per object and per action. Every question is
/// issued even when the outcome is already decided, so call counts are fixed.
bool classify_relevance(const SceneSegment& segment, const QueryIntent& intent, Provider& provider,
                        RelevanceAggregation aggregation = RelevanceAggregation::kAny,
                        std::string_view source_id = {});

struct StageLatency {
  std::size_t calls = 0;
  double total_sec = 0.0;
};

/// Wall time per pipeline stage. Stage names: qa_filtering,
/// query_guided_captioning (SE), selective_recaptioning (LE),
/// generic_captioning, embedding.
using LatencyBreakdown = std::map<std::string, StageLatency>;

struct SegmentFailure {
  std::size_t segment_id = 0;
  std::string message;
};

struct CaptionOptions {
  CaptionMode mode = CaptionMode::kStorageEfficient;
  RelevanceAggregation aggregation = RelevanceAggregation::kAny;
  std::string source_id;
  // Required in LE mode.
  const CaptionStore* store = nullptr;
};

struct CaptionRun {
  std::vector<CaptionRecord> records;  // one per segment, in segment order
  std::vector<SegmentFailure> failures;
  LatencyBreakdown latency;
};

/// Dual-path captioning. Segments passing the relevance check get a
/// query-guided caption; the rest keep (LE) or request (SE) a generic one.
/// A provider failure on a segment is recorded and the segment falls back to
/// the generic path; the remaining segments still run. Requests for distinct
/// segments run concurrently up to provider.max_concurrency(), and the result
/// is identical to sequential execution.
CaptionRun generate_captions(std::span<const SceneSegment> segments, const QueryIntent& intent,
                             Provider& provider, const CaptionOptions& options);

/// Builds the LE-mode store by requesting a generic caption for every segment.
CaptionStore precompute_caption_store(std::span<const SceneSegment> segments,
                                      std::string_view source_id, Provider& provider);

}  // namespace vmr

// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vmr/captions.hpp"
#include "vmr/eval.hpp"
#include "vmr/modulation.hpp"

namespace vmr {

// All formats here are one JSON object per line, reals with 17 significant
// digits.

// {segment_id, start, end, representative_frame, representative_timestamp,
//  path, relevance_passed, fallback, text, embedding}
void write_caption_records(std::ostream& out, std::span<const CaptionRecord> records);
std::vector<CaptionRecord> read_caption_records(std::istream& in);

// {segment_id, segment_start, segment_end, score, caption_text, path,
//  reweighted_embedding}
void write_scored_captions(std::ostream& out, std::span<const ScoredCaption> captions);
std::vector<ScoredCaption> read_scored_captions(std::istream& in);

/// A line of a ground-truth or prediction file: {query_id, start, end[, confidence]}.
/// Integer query ids are accepted and kept in their decimal form.
struct MomentEntry {
  std::string query_id;
  TemporalSegment segment;
  std::optional<double> confidence;
};

std::vector<MomentEntry> read_moment_entries(std::istream& in);

struct AlignedMoments {
  std::vector<std::string> query_ids;  // ground-truth order of first appearance
  PredictionSet predictions;
  GroundTruthSet ground_truth;
};

/// Groups entries by query id following the ground-truth file. Predictions
/// without a confidence rank by file order. Predictions for unknown queries
/// are a format error; an empty prediction list is an empty-input error.
AlignedMoments align_moments(std::span<const MomentEntry> predictions,
                             std::span<const MomentEntry> ground_truth);

}  // namespace vmr

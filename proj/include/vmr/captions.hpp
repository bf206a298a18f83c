// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "vmr/embeddings.hpp"

namespace vmr {

struct QueryIntent {
  std::string raw_query;
  // Lowercased, deduplicated, no empty entries.
  std::vector<std::string> objects;
  std::vector<std::string> actions;

  std::size_t term_count() const noexcept { return objects.size() + actions.size(); }
};

struct SceneSegment {
  std::size_t segment_id = 0;
  TimeSpan span;
  FrameRecord representative_frame;
};

enum class CaptionPath { kQueryGuided, kGeneric };

std::string_view to_string(CaptionPath path) noexcept;
CaptionPath parse_caption_path(std::string_view text);

/// One caption per scene segment. path == kQueryGuided iff relevance_passed.
struct CaptionRecord {
  SceneSegment segment;
  std::string text;
  EmbeddingVector embedding;
  CaptionPath path = CaptionPath::kGeneric;
  bool relevance_passed = false;
  // Set when a provider failure forced the generic path.
  bool fallback = false;
};

}  // namespace vmr

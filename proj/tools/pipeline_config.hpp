// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>

#include "vmr/caption_pipeline.hpp"
#include "vmr/modulation.hpp"
#include "vmr/svc.hpp"

namespace vmr::cli {

/// Settings shared by all commands. Config files are `key = value` lines;
/// `#` starts a comment. Keys:
///   theta, rank_k, anchor_update (compressed|original),
///   alpha1, alpha2, vbar_form (product|mean|min),
///   caption_interval_sec, mode (SE|LE), relevance_aggregation (any|all),
///   seed, max_vector_slots (alias budget.max_vector_slots; "none" = unlimited)
struct PipelineConfig {
  SvcConfig svc;
  ModulationConfig modulation;
  double caption_interval_sec = 2.0;
  CaptionMode mode = CaptionMode::kStorageEfficient;
  RelevanceAggregation aggregation = RelevanceAggregation::kAny;
  std::uint64_t seed = 0;
  std::size_t max_vector_slots = std::numeric_limits<std::size_t>::max();

  void validate() const;
  /// Applies one key; unknown keys and malformed values are config errors.
  void set(std::string_view key, std::string_view value);
  /// Applies every line of `text` on top of the current values.
  void merge(std::string_view text, std::string_view origin = "config");
  void merge_file(const std::filesystem::path& path);
  std::string to_text() const;
};

}  // namespace vmr::cli

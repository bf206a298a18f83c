// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "vmr/captions.hpp"

namespace vmr {

struct StoredCaption {
  std::string source_id;
  std::size_t segment_id = 0;
  double start = 0.0;
  double end = 0.0;
  std::string text;
};

/// Pre-computed generic captions for latency-efficient mode. File format is
/// one JSON object per line: {source_id, segment_id, start, end, text}.
class CaptionStore {
 public:
  static CaptionStore read(std::istream& in);
  static CaptionStore load(const std::filesystem::path& path);
  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;

  void put(StoredCaption caption);
  const StoredCaption* find(std::string_view source_id, std::size_t segment_id) const;
  std::size_t size() const noexcept { return entries_.size(); }

  /// Store-missing error unless every segment has an entry whose span
  /// matches. A span mismatch means the store was built for a different
  /// duration or segment interval.
  void require_coverage(std::string_view source_id, std::span<const SceneSegment> segments) const;

 private:
  std::map<std::pair<std::string, std::size_t>, StoredCaption, std::less<>> entries_;
};

}  // namespace vmr

// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vmr/embeddings.hpp"

namespace vmr {

/// Inclusive range of frame indices planted as one near-duplicate plateau.
struct PlateauRange {
  std::size_t first = 0;
  std::size_t last = 0;

  friend bool operator==(const PlateauRange&, const PlateauRange&) = default;
};

struct TraceHeader {
  std::size_t dimension = 0;
  double duration_sec = 0.0;
  std::string source_id;
  // Only present on synthetic traces.
  std::vector<PlateauRange> plateaus;

  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

struct Trace {
  TraceHeader header;
  FrameSequence sequence;

  friend bool operator==(const Trace&, const Trace&) = default;
};

// Embedding trace file: one JSON object per line.
//
//   {"dimension":D,"duration_sec":T,"source_id":"..."[,"plateaus":[[a,b],...]]}
//   {"frame_index":i,"timestamp_sec":t,"embedding":[...][,"merged_span":[s,e]]}
//   ...
//
// Reals are written with 17 significant digits, so write(read(f)) == f for
// any file this module produced.

Trace read_trace(std::istream& in);
void write_trace(std::ostream& out, const Trace& trace);

Trace read_trace_file(const std::filesystem::path& path);
void write_trace_file(const std::filesystem::path& path, const Trace& trace);

/// "%.17g", the shortest fixed-width form that round-trips every double.
std::string format_real(double value);

}  // namespace vmr

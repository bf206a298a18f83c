// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/caption_store.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "vmr/error.hpp"
#include "vmr/trace_io.hpp"

namespace vmr {

CaptionStore CaptionStore::read(std::istream& in) {
  CaptionStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      StoredCaption c;
      c.source_id = j.at("source_id").get<std::string>();
      c.segment_id = j.at("segment_id").get<std::size_t>();
      c.start = j.at("start").get<double>();
      c.end = j.at("end").get<double>();
      c.text = j.at("text").get<std::string>();
      store.put(std::move(c));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kFormat, fmt::format("caption store line {}: {}", line_no, e.what()));
    }
  }
  return store;
}

CaptionStore CaptionStore::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kStoreMissing, fmt::format("caption store '{}' not found", path.string()));
  }
  return read(in);
}

void CaptionStore::write(std::ostream& out) const {
  for (const auto& [key, c] : entries_) {
    out << "{\"source_id\":" << nlohmann::json(c.source_id).dump()
        << ",\"segment_id\":" << c.segment_id << ",\"start\":" << format_real(c.start)
        << ",\"end\":" << format_real(c.end) << ",\"text\":" << nlohmann::json(c.text).dump()
        << "}\n";
  }
}

void CaptionStore::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, fmt::format("cannot write caption store '{}'", path.string()));
  write(out);
}

void CaptionStore::put(StoredCaption caption) {
  auto key = std::make_pair(caption.source_id, caption.segment_id);
  entries_.insert_or_assign(std::move(key), std::move(caption));
}

const StoredCaption* CaptionStore::find(std::string_view source_id, std::size_t segment_id) const {
  auto it = entries_.find(std::make_pair(std::string(source_id), segment_id));
  return it == entries_.end() ? nullptr : &it->second;
}

void CaptionStore::require_coverage(std::string_view source_id,
                                    std::span<const SceneSegment> segments) const {
  constexpr double kTolerance = 1e-9;
  for (const SceneSegment& seg : segments) {
    const StoredCaption* c = find(source_id, seg.segment_id);
    if (!c) {
      throw Error(ErrorKind::kStoreMissing,
                  fmt::format("no stored caption for source '{}' segment {}", source_id,
                              seg.segment_id));
    }
    if (std::abs(c->start - seg.span.start) > kTolerance ||
        std::abs(c->end - seg.span.end) > kTolerance) {
      throw Error(ErrorKind::kStoreMissing,
                  fmt::format("stale caption store: source '{}' segment {} spans [{}, {}), "
                              "expected [{}, {})",
                              source_id, seg.segment_id, c->start, c->end, seg.span.start,
                              seg.span.end));
    }
  }
}

}  // namespace vmr

// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/records_io.hpp"

#include <istream>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "vmr/error.hpp"
#include "vmr/trace_io.hpp"

namespace vmr {
namespace {

using nlohmann::json;

std::string vector_text(const EmbeddingVector& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.dimension(); ++i) {
    if (i) out += ',';
    out += format_real(v[i]);
  }
  return out + ']';
}

template <typename Fn>
void for_each_line(std::istream& in, const char* what, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kFormat, fmt::format("{} line {}: {}", what, line_no, e.what()));
    }
  }
}

}  // namespace

void write_caption_records(std::ostream& out, std::span<const CaptionRecord> records) {
  for (const CaptionRecord& r : records) {
    out << "{\"segment_id\":" << r.segment.segment_id
        << ",\"start\":" << format_real(r.segment.span.start)
        << ",\"end\":" << format_real(r.segment.span.end)
        << ",\"representative_frame\":" << r.segment.representative_frame.frame_index
        << ",\"representative_timestamp\":" << format_real(r.segment.representative_frame.timestamp)
        << ",\"path\":\"" << to_string(r.path) << '"'
        << ",\"relevance_passed\":" << (r.relevance_passed ? "true" : "false")
        << ",\"fallback\":" << (r.fallback ? "true" : "false")
        << ",\"text\":" << json(r.text).dump() << ",\"embedding\":" << vector_text(r.embedding)
        << "}\n";
  }
}

std::vector<CaptionRecord> read_caption_records(std::istream& in) {
  std::vector<CaptionRecord> out;
  for_each_line(in, "caption records", [&](const json& j) {
    CaptionRecord r;
    r.segment.segment_id = j.at("segment_id").get<std::size_t>();
    r.segment.span = {j.at("start").get<double>(), j.at("end").get<double>()};
    r.segment.representative_frame.frame_index = j.at("representative_frame").get<std::size_t>();
    r.segment.representative_frame.timestamp = j.at("representative_timestamp").get<double>();
    r.path = parse_caption_path(j.at("path").get<std::string>());
    r.relevance_passed = j.at("relevance_passed").get<bool>();
    r.fallback = j.value("fallback", false);
    r.text = j.at("text").get<std::string>();
    r.embedding = EmbeddingVector(j.at("embedding").get<std::vector<double>>());
    if ((r.path == CaptionPath::kQueryGuided) != r.relevance_passed) {
      throw Error(ErrorKind::kFormat,
                  fmt::format("segment {}: path and relevance flag disagree", r.segment.segment_id));
    }
    out.push_back(std::move(r));
  });
  return out;
}

void write_scored_captions(std::ostream& out, std::span<const ScoredCaption> captions) {
  for (const ScoredCaption& s : captions) {
    out << "{\"segment_id\":" << s.caption.segment.segment_id
        << ",\"segment_start\":" << format_real(s.caption.segment.span.start)
        << ",\"segment_end\":" << format_real(s.caption.segment.span.end)
        << ",\"score\":" << format_real(s.score)
        << ",\"caption_text\":" << json(s.caption.text).dump() << ",\"path\":\""
        << to_string(s.caption.path) << "\",\"reweighted_embedding\":"
        << vector_text(s.reweighted_embedding) << "}\n";
  }
}

std::vector<ScoredCaption> read_scored_captions(std::istream& in) {
  std::vector<ScoredCaption> out;
  for_each_line(in, "scored captions", [&](const json& j) {
    ScoredCaption s;
    s.caption.segment.segment_id = j.value("segment_id", out.size());
    s.caption.segment.span = {j.at("segment_start").get<double>(), j.at("segment_end").get<double>()};
    s.score = j.at("score").get<double>();
    s.caption.text = j.at("caption_text").get<std::string>();
    s.caption.path = parse_caption_path(j.value("path", std::string("generic")));
    s.caption.relevance_passed = s.caption.path == CaptionPath::kQueryGuided;
    if (j.contains("reweighted_embedding")) {
      s.reweighted_embedding = EmbeddingVector(j["reweighted_embedding"].get<std::vector<double>>());
    }
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<MomentEntry> read_moment_entries(std::istream& in) {
  std::vector<MomentEntry> out;
  for_each_line(in, "moment file", [&](const json& j) {
    MomentEntry e;
    const json& id = j.at("query_id");
    e.query_id = id.is_string() ? id.get<std::string>() : id.dump();
    e.segment = {j.at("start").get<double>(), j.at("end").get<double>()};
    e.segment.validate();
    if (j.contains("confidence")) e.confidence = j["confidence"].get<double>();
    out.push_back(std::move(e));
  });
  return out;
}

AlignedMoments align_moments(std::span<const MomentEntry> predictions,
                             std::span<const MomentEntry> ground_truth) {
  if (ground_truth.empty()) throw Error(ErrorKind::kEmptyInput, "ground-truth file is empty");
  if (predictions.empty()) throw Error(ErrorKind::kEmptyInput, "prediction file is empty");

  AlignedMoments out;
  std::map<std::string, std::size_t, std::less<>> index;
  for (const MomentEntry& g : ground_truth) {
    auto [it, inserted] = index.try_emplace(g.query_id, out.query_ids.size());
    if (inserted) {
      out.query_ids.push_back(g.query_id);
      out.ground_truth.emplace_back();
      out.predictions.emplace_back();
    }
    out.ground_truth[it->second].push_back(g.segment);
  }
  for (const MomentEntry& p : predictions) {
    auto it = index.find(p.query_id);
    if (it == index.end()) {
      throw Error(ErrorKind::kFormat, fmt::format("prediction for unknown query '{}'", p.query_id));
    }
    auto& list = out.predictions[it->second];
    // Without a confidence, earlier lines rank higher.
    const double confidence = p.confidence.value_or(-static_cast<double>(list.size()));
    list.push_back({p.segment, confidence});
  }
  return out;
}

}  // namespace vmr

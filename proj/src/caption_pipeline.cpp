// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/caption_pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <optional>
#include <thread>

#include <fmt/format.h>

#include "vmr/error.hpp"

namespace vmr {

std::string_view to_string(CaptionPath path) noexcept {
  return path == CaptionPath::kQueryGuided ? "query_guided" : "generic";
}

CaptionPath parse_caption_path(std::string_view text) {
  if (text == "query_guided") return CaptionPath::kQueryGuided;
  if (text == "generic") return CaptionPath::kGeneric;
  throw Error(ErrorKind::kFormat, fmt::format("unknown caption path '{}'", text));
}

std::string_view to_string(CaptionMode mode) noexcept {
  return mode == CaptionMode::kStorageEfficient ? "SE" : "LE";
}

CaptionMode parse_caption_mode(std::string_view text) {
  if (text == "SE" || text == "se") return CaptionMode::kStorageEfficient;
  if (text == "LE" || text == "le") return CaptionMode::kLatencyEfficient;
  throw Error(ErrorKind::kConfig, fmt::format("unknown caption mode '{}' (expected SE or LE)", text));
}

std::string_view to_string(RelevanceAggregation aggregation) noexcept {
  return aggregation == RelevanceAggregation::kAny ? "any" : "all";
}

RelevanceAggregation parse_relevance_aggregation(std::string_view text) {
  if (text == "any") return RelevanceAggregation::kAny;
  if (text == "all") return RelevanceAggregation::kAll;
  throw Error(ErrorKind::kConfig, fmt::format("unknown relevance aggregation '{}'", text));
}

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string image_ref(std::string_view source_id, const SceneSegment& segment) {
  return fmt::format("{}#frame={}", source_id.empty() ? "video" : source_id,
                     segment.representative_frame.frame_index);
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct SegmentOutcome {
  CaptionRecord record;
  std::vector<std::string> failures;
  LatencyBreakdown latency;
};

// Runs one provider call and charges its wall time to `stage`, whether or
// not the call throws.
template <typename Fn>
auto timed(LatencyBreakdown& latency, const char* stage, Fn&& fn) {
  Stopwatch watch;
  auto charge = [&] {
    auto& s = latency[stage];
    s.calls += 1;
    s.total_sec += watch.seconds();
  };
  try {
    auto result = fn();
    charge();
    return result;
  } catch (...) {
    charge();
    throw;
  }
}

SegmentOutcome caption_segment(const SceneSegment& segment, const QueryIntent& intent,
                               Provider& provider, const CaptionOptions& options) {
  SegmentOutcome out;
  CaptionRecord& rec = out.record;
  rec.segment = segment;
  const bool latency_efficient = options.mode == CaptionMode::kLatencyEfficient;
  const std::string ref = image_ref(options.source_id, segment);

  bool relevant = false;
  try {
    Stopwatch watch;
    relevant = classify_relevance(segment, intent, provider, options.aggregation, options.source_id);
    auto& s = out.latency["qa_filtering"];
    s.calls += intent.term_count();
    s.total_sec += watch.seconds();
  } catch (const ProviderError& e) {
    out.failures.push_back(e.detail());
    rec.fallback = true;
  }

  if (latency_efficient) rec.text = options.store->find(options.source_id, segment.segment_id)->text;

  if (relevant) {
    ProviderRequest request{RequestKind::kCaptionQueryGuided, segment.segment_id,
                            std::string(kQueryGuidedPrompt), ref, intent.raw_query};
    try {
      rec.text = timed(out.latency,
                       latency_efficient ? "selective_recaptioning" : "query_guided_captioning",
                       [&] { return ask_text(provider, request); });
      rec.path = CaptionPath::kQueryGuided;
      rec.relevance_passed = true;
    } catch (const ProviderError& e) {
      out.failures.push_back(e.detail());
      rec.fallback = true;
    }
  }

  if (rec.path == CaptionPath::kGeneric && !latency_efficient) {
    ProviderRequest request{RequestKind::kCaptionGeneric, segment.segment_id,
                            std::string(kGenericPrompt), ref, std::nullopt};
    try {
      rec.text = timed(out.latency, "generic_captioning", [&] { return ask_text(provider, request); });
    } catch (const ProviderError& e) {
      out.failures.push_back(e.detail());
      rec.fallback = true;
    }
  }

  if (!rec.text.empty()) {
    ProviderRequest request{RequestKind::kEmbedText, segment.segment_id, rec.text, std::nullopt,
                            std::nullopt};
    try {
      rec.embedding = timed(out.latency, "embedding", [&] { return ask_embedding(provider, request); });
    } catch (const ProviderError& e) {
      out.failures.push_back(e.detail());
    }
  }
  return out;
}

}  // namespace

QueryIntent parse_query_via_provider(std::string_view raw, Provider& provider) {
  if (trim(raw).empty()) throw Error(ErrorKind::kEmptyQuery, "query is empty");
  ProviderRequest request{RequestKind::kParseQuery, std::nullopt, std::string(kParsePrompt),
                          std::nullopt, std::string(trim(raw))};
  const std::string answer = ask_text(provider, request);

  QueryIntent intent;
  intent.raw_query = std::string(trim(raw));
  std::string_view rest = answer;
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    std::string_view part = trim(rest.substr(0, semi));
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    const auto colon = part.find(':');
    if (colon == std::string_view::npos) {
      throw ProviderError(fmt::format("unparseable query analysis '{}'", answer));
    }
    const std::string label = lowercase(trim(part.substr(0, colon)));
    std::vector<std::string>* target = nullptr;
    if (label == "objects") target = &intent.objects;
    if (label == "actions") target = &intent.actions;
    if (!target) throw ProviderError(fmt::format("unknown query analysis label '{}'", label));
    std::string_view items = part.substr(colon + 1);
    while (!items.empty()) {
      const auto comma = items.find(',');
      const std::string item = lowercase(trim(items.substr(0, comma)));
      items = comma == std::string_view::npos ? std::string_view{} : items.substr(comma + 1);
      if (!item.empty() && std::find(target->begin(), target->end(), item) == target->end()) {
        target->push_back(item);
      }
    }
  }
  return intent;
}

std::vector<SceneSegment> segment_video(double duration, double interval, const FrameSequence& frames) {
  if (!(interval > 0.0) || !std::isfinite(interval)) {
    throw Error(ErrorKind::kConfig, fmt::format("segment interval must be > 0, got {}", interval));
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw Error(ErrorKind::kConfig, fmt::format("duration must be > 0, got {}", duration));
  }
  if (frames.empty()) throw Error(ErrorKind::kEmptyInput, "cannot segment a video with no frames");

  auto count = static_cast<std::size_t>(std::ceil(duration / interval));
  // Guard against a zero-length tail produced by rounding in the division.
  while (count > 1 && static_cast<double>(count - 1) * interval >= duration) --count;

  std::vector<SceneSegment> segments;
  segments.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SceneSegment seg;
    seg.segment_id = i;
    seg.span.start = static_cast<double>(i) * interval;
    seg.span.end = i + 1 == count ? duration : static_cast<double>(i + 1) * interval;
    seg.representative_frame = frames.frames[*nearest_frame(frames.frames, seg.span.midpoint())];
    segments.push_back(std::move(seg));
  }
  return segments;
}

bool classify_relevance(const SceneSegment& segment, const QueryIntent& intent, Provider& provider,
                        RelevanceAggregation aggregation, std::string_view source_id) {
  if (intent.term_count() == 0) {
    throw Error(ErrorKind::kEmptyQuery, "query has no objects or actions to check");
  }
  std::size_t yes = 0;
  auto ask = [&](std::string_view label, const std::string& term) {
    ProviderRequest request{RequestKind::kQaRelevance, segment.segment_id,
                            fmt::format("{} {}: {}", kRelevancePrompt, label, term),
                            image_ref(source_id, segment), intent.raw_query};
    yes += ask_yes_no(provider, request) ? 1 : 0;
  };
  for (const auto& object : intent.objects) ask("object", object);
  for (const auto& action : intent.actions) ask("action", action);
  return aggregation == RelevanceAggregation::kAny ? yes > 0 : yes == intent.term_count();
}

CaptionRun generate_captions(std::span<const SceneSegment> segments, const QueryIntent& intent,
                             Provider& provider, const CaptionOptions& options) {
  if (intent.term_count() == 0) {
    throw Error(ErrorKind::kEmptyQuery, "query has no objects or actions to check");
  }
  if (options.mode == CaptionMode::kLatencyEfficient) {
    if (!options.store) throw Error(ErrorKind::kStoreMissing, "LE mode requires a caption store");
    options.store->require_coverage(options.source_id, segments);
  }

  std::vector<std::optional<SegmentOutcome>> outcomes(segments.size());
  const std::size_t workers = std::min(provider.max_concurrency(), segments.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < segments.size(); ++i) {
      outcomes[i] = caption_segment(segments[i], intent, provider, options);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = next++; i < segments.size(); i = next++) {
              outcomes[i] = caption_segment(segments[i], intent, provider, options);
            }
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  CaptionRun run;
  run.records.reserve(segments.size());
  for (auto& outcome : outcomes) {
    for (auto& message : outcome->failures) {
      run.failures.push_back({outcome->record.segment.segment_id, std::move(message)});
    }
    for (const auto& [stage, s] : outcome->latency) {
      run.latency[stage].calls += s.calls;
      run.latency[stage].total_sec += s.total_sec;
    }
    run.records.push_back(std::move(outcome->record));
  }
  return run;
}

CaptionStore precompute_caption_store(std::span<const SceneSegment> segments,
                                      std::string_view source_id, Provider& provider) {
  CaptionStore store;
  for (const SceneSegment& seg : segments) {
    ProviderRequest request{RequestKind::kCaptionGeneric, seg.segment_id,
                            std::string(kGenericPrompt), image_ref(source_id, seg), std::nullopt};
    store.put({std::string(source_id), seg.segment_id, seg.span.start, seg.span.end,
               ask_text(provider, request)});
  }
  return store;
}

}  // namespace vmr

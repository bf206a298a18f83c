// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/modulation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "vmr/error.hpp"

namespace vmr {

std::string_view to_string(RefinedForm form) noexcept {
  switch (form) {
    case RefinedForm::kProduct: return "product";
    case RefinedForm::kMean: return "mean";
    case RefinedForm::kMin: return "min";
  }
  return "product";
}

RefinedForm parse_refined_form(std::string_view text) {
  if (text == "product") return RefinedForm::kProduct;
  if (text == "mean") return RefinedForm::kMean;
  if (text == "min") return RefinedForm::kMin;
  throw Error(ErrorKind::kConfig, fmt::format("unknown refined form '{}'", text));
}

void ModulationConfig::validate() const {
  if (!std::isfinite(alpha1) || !std::isfinite(alpha2) || alpha1 < 0.0 || alpha2 < 0.0) {
    throw Error(ErrorKind::kConfig,
                fmt::format("alphas must be finite and >= 0 (alpha1={}, alpha2={})", alpha1, alpha2));
  }
  if (!(alpha1 + alpha2 > 0.0)) throw Error(ErrorKind::kConfig, "alpha1 + alpha2 must be > 0");
}

double visual_query_similarity(const EmbeddingVector& frame, const EmbeddingVector& query) {
  return cosine_similarity(frame, query);
}

double refined_caption_similarity(const EmbeddingVector& query, const EmbeddingVector& frame,
                                  const EmbeddingVector& caption, RefinedForm form) {
  const double query_caption = std::max(0.0, cosine_similarity(query, caption));
  const double frame_caption = std::max(0.0, cosine_similarity(frame, caption));
  switch (form) {
    case RefinedForm::kProduct: return query_caption * frame_caption;
    case RefinedForm::kMean: return 0.5 * (query_caption + frame_caption);
    case RefinedForm::kMin: return std::min(query_caption, frame_caption);
  }
  return query_caption * frame_caption;
}

double caption_weight(const EmbeddingVector& frame, const EmbeddingVector& caption,
                      const EmbeddingVector& query, const ModulationConfig& cfg) {
  cfg.validate();
  return cfg.alpha1 * visual_query_similarity(frame, query) +
         cfg.alpha2 * refined_caption_similarity(query, frame, caption, cfg.refined_form);
}

std::vector<ScoredCaption> modulate_captions(const FrameSequence& frames,
                                             std::span<const CaptionRecord> captions,
                                             const EmbeddingVector& query,
                                             const ModulationConfig& cfg) {
  cfg.validate();
  std::vector<ScoredCaption> out;
  out.reserve(captions.size());
  for (const CaptionRecord& caption : captions) {
    const auto paired = nearest_frame(frames.frames, caption.segment.span.midpoint());
    if (!paired) {
      throw Error(ErrorKind::kPairing,
                  fmt::format("caption for segment {} has no frame to pair with",
                              caption.segment.segment_id));
    }
    if (caption.embedding.empty()) {
      throw Error(ErrorKind::kDimension,
                  fmt::format("caption for segment {} has no embedding", caption.segment.segment_id));
    }
    ScoredCaption scored;
    scored.caption = caption;
    scored.score = caption_weight(frames.frames[*paired].embedding, caption.embedding, query, cfg);
    scored.reweighted_embedding = caption.embedding.scaled(scored.score);
    out.push_back(std::move(scored));
  }
  return out;
}

}  // namespace vmr

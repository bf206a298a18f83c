// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/embeddings.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "vmr/error.hpp"

namespace vmr {
namespace {

void require_finite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorKind::kNumeric, fmt::format("non-finite embedding entry at index {}", i));
    }
  }
}

}  // namespace

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  require_finite(values_);
}

EmbeddingVector::EmbeddingVector(std::initializer_list<double> values) : values_(values) {
  require_finite(values_);
}

double EmbeddingVector::squared_norm() const noexcept {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return sum;
}

double EmbeddingVector::norm() const noexcept { return std::sqrt(squared_norm()); }

bool EmbeddingVector::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

EmbeddingVector EmbeddingVector::scaled(double factor) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [factor](double v) { return v * factor; });
  return EmbeddingVector(std::move(out));
}

void require_same_dimension(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() == 0 || b.dimension() == 0) {
    throw Error(ErrorKind::kDimension, "embedding has dimension 0");
  }
  if (a.dimension() != b.dimension()) {
    throw Error(ErrorKind::kDimension,
                fmt::format("dimension mismatch: {} vs {}", a.dimension(), b.dimension()));
  }
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  require_same_dimension(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) sum += a[i] * b[i];
  return sum;
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  require_same_dimension(a, b);
  const double na = a.squared_norm();
  const double nb = b.squared_norm();
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorKind::kDegenerateInput, "cosine similarity of a zero vector");
  }
  // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): for a == b this is exactly
  // na, so self-similarity is exactly 1.
  double denom = std::sqrt(na * nb);
  if (!std::isfinite(denom) || denom == 0.0) denom = std::sqrt(na) * std::sqrt(nb);
  return std::clamp(dot(a, b) / denom, -1.0, 1.0);
}

EmbeddingVector l2_normalize(const EmbeddingVector& a) {
  if (a.dimension() == 0) throw Error(ErrorKind::kDimension, "embedding has dimension 0");
  const double n = a.norm();
  if (n == 0.0) throw Error(ErrorKind::kDegenerateInput, "cannot normalize a zero vector");
  return a.scaled(1.0 / n);
}

void FrameSequence::validate() const {
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw Error(ErrorKind::kFormat, fmt::format("invalid duration {}", duration));
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const FrameRecord& f = frames[i];
    if (!(f.timestamp >= 0.0) || !std::isfinite(f.timestamp)) {
      throw Error(ErrorKind::kFormat, fmt::format("frame {} has invalid timestamp", f.frame_index));
    }
    if (f.timestamp > duration) {
      throw Error(ErrorKind::kFormat,
                  fmt::format("frame {} timestamp {} exceeds duration {}", f.frame_index,
                              f.timestamp, duration));
    }
    if (i > 0 && !(frames[i - 1].timestamp < f.timestamp)) {
      throw Error(ErrorKind::kOrdering,
                  fmt::format("timestamps not strictly increasing at frame {}", f.frame_index));
    }
    if (f.merged_span) {
      const TimeSpan& s = *f.merged_span;
      if (!(s.start <= s.end) || f.timestamp < s.start || f.timestamp > s.end) {
        throw Error(ErrorKind::kFormat,
                    fmt::format("frame {} merged span does not cover its timestamp", f.frame_index));
      }
    }
    if (i > 0 && f.embedding.dimension() != frames[0].embedding.dimension()) {
      throw Error(ErrorKind::kDimension,
                  fmt::format("frame {} has dimension {}, expected {}", f.frame_index,
                              f.embedding.dimension(), frames[0].embedding.dimension()));
    }
  }
}

std::optional<std::size_t> nearest_frame(std::span<const FrameRecord> frames, double time) {
  if (frames.empty()) return std::nullopt;
  auto it = std::lower_bound(frames.begin(), frames.end(), time,
                             [](const FrameRecord& f, double t) { return f.timestamp < t; });
  if (it == frames.begin()) return 0;
  if (it == frames.end()) return frames.size() - 1;
  const auto after = static_cast<std::size_t>(it - frames.begin());
  const std::size_t before = after - 1;
  // Tie goes to the earlier frame.
  if (time - frames[before].timestamp <= frames[after].timestamp - time) return before;
  return after;
}

}  // namespace vmr

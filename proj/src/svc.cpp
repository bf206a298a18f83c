// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/svc.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "vmr/error.hpp"

namespace vmr {
namespace {

struct Gram {
  double aa = 0.0;  // |anchor|^2
  double bb = 0.0;  // |frame|^2
  double ab = 0.0;  // <anchor, frame>
};

Gram gram_of(const EmbeddingVector& a, const EmbeddingVector& b) {
  Gram g;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    g.aa += a[i] * a[i];
    g.bb += b[i] * b[i];
    g.ab += a[i] * b[i];
  }
  return g;
}

// det(G) = |x|^2 |y - proj_x y|^2 with x the longer row. Avoids the
// cancellation in aa*bb - ab^2 for nearly parallel rows.
double gram_determinant(const EmbeddingVector& a, const EmbeddingVector& b, const Gram& g) {
  const bool a_longer = g.aa >= g.bb;
  const EmbeddingVector& x = a_longer ? a : b;
  const EmbeddingVector& y = a_longer ? b : a;
  const double xx = a_longer ? g.aa : g.bb;
  if (xx == 0.0) return 0.0;
  const double coef = g.ab / xx;
  double resid = 0.0;
  for (std::size_t i = 0; i < x.dimension(); ++i) {
    const double r = y[i] - coef * x[i];
    resid += r * r;
  }
  return xx * resid;
}

// Unit eigenvector of [[aa, ab], [ab, bb]] for eigenvalue lambda.
std::array<double, 2> top_eigenvector(const Gram& g, double lambda) {
  const std::array<double, 2> c1{g.ab, lambda - g.aa};
  const std::array<double, 2> c2{lambda - g.bb, g.ab};
  const double n1 = std::hypot(c1[0], c1[1]);
  const double n2 = std::hypot(c2[0], c2[1]);
  if (n1 == 0.0 && n2 == 0.0) return {1.0, 0.0};  // G is a multiple of I
  if (n1 > n2) return {c1[0] / n1, c1[1] / n1};
  return {c2[0] / n2, c2[1] / n2};
}

void require_finite_pair(const StackedPair& m) {
  require_same_dimension(m.anchor, m.frame);
  for (const EmbeddingVector* row : {&m.anchor, &m.frame}) {
    for (double v : row->values()) {
      if (!std::isfinite(v)) throw Error(ErrorKind::kNumeric, "non-finite entry in stacked pair");
    }
  }
}

EmbeddingVector row_mean(const PairApproximation& approx) {
  std::vector<double> mean(approx.rows[0].dimension());
  for (std::size_t i = 0; i < mean.size(); ++i) {
    mean[i] = 0.5 * (approx.rows[0][i] + approx.rows[1][i]);
  }
  return EmbeddingVector(std::move(mean));
}

}  // namespace

void SvcConfig::validate() const {
  if (std::isnan(theta)) throw Error(ErrorKind::kConfig, "theta is NaN");
  if (rank_k != 1 && rank_k != 2) {
    throw Error(ErrorKind::kConfig, fmt::format("rank_k must be 1 or 2, got {}", rank_k));
  }
}

PairApproximation truncated_svd_rank_k(const StackedPair& m, int k) {
  if (k != 1 && k != 2) throw Error(ErrorKind::kConfig, fmt::format("rank k must be 1 or 2, got {}", k));
  require_finite_pair(m);

  const Gram g = gram_of(m.anchor, m.frame);
  const double half_trace = 0.5 * (g.aa + g.bb);
  const double radius = std::hypot(0.5 * (g.aa - g.bb), g.ab);
  const double lambda1 = half_trace + radius;
  const double det = gram_determinant(m.anchor, m.frame, g);
  const double lambda2 = lambda1 > 0.0 ? std::max(0.0, det / lambda1) : 0.0;
  if (!std::isfinite(lambda1) || !std::isfinite(lambda2)) {
    throw Error(ErrorKind::kNumeric, "Gram matrix overflow in truncated SVD");
  }

  PairApproximation out;
  out.singular_values = {std::sqrt(lambda1), std::sqrt(lambda2)};
  if (k == 2) {
    out.rows = {m.anchor, m.frame};
    out.discarded_energy = 0.0;
    return out;
  }

  const auto u = top_eigenvector(g, lambda1);
  // c = u^T M = sigma_1 v_1^T; row r of the rank-1 reconstruction is u_r c.
  const std::size_t dim = m.anchor.dimension();
  std::vector<double> c(dim);
  for (std::size_t i = 0; i < dim; ++i) c[i] = u[0] * m.anchor[i] + u[1] * m.frame[i];
  std::vector<double> top(dim), bottom(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    top[i] = u[0] * c[i];
    bottom[i] = u[1] * c[i];
  }
  out.rows = {EmbeddingVector(std::move(top)), EmbeddingVector(std::move(bottom))};
  out.discarded_energy = lambda2;
  return out;
}

EmbeddingVector compress_pair(const EmbeddingVector& anchor, const EmbeddingVector& frame,
                              const SvcConfig& cfg) {
  cfg.validate();
  require_same_dimension(anchor, frame);
  if (anchor.is_zero() || frame.is_zero()) {
    throw Error(ErrorKind::kDegenerateInput, "cannot compress a zero embedding");
  }
  return row_mean(truncated_svd_rank_k({anchor, frame}, cfg.rank_k));
}

std::string CompressionReport::to_json() const {
  nlohmann::json merges_json = nlohmann::json::array();
  for (const MergeEvent& m : merges) {
    merges_json.push_back({{"anchor_index", m.anchor_index},
                           {"absorbed_index", m.absorbed_index},
                           {"similarity", m.similarity}});
  }
  nlohmann::json j;
  j["input_count"] = input_count;
  j["output_count"] = output_count;
  j["merge_count"] = merges.size();
  j["total_reconstruction_error"] = total_reconstruction_error;
  j["merges"] = std::move(merges_json);
  return j.dump();
}

std::pair<FrameSequence, CompressionReport> compress_sequence(const FrameSequence& seq,
                                                              const SvcConfig& cfg) {
  cfg.validate();
  if (seq.empty()) throw Error(ErrorKind::kEmptyInput, "cannot compress an empty frame sequence");
  seq.validate();

  FrameSequence out;
  out.duration = seq.duration;
  CompressionReport report;
  report.input_count = seq.size();

  out.frames.push_back(seq.frames.front());
  EmbeddingVector anchor = seq.frames.front().embedding;

  for (std::size_t i = 1; i < seq.size(); ++i) {
    const FrameRecord& frame = seq.frames[i];
    const double sim = cosine_similarity(anchor, frame.embedding);
    if (!(sim > cfg.theta)) {
      out.frames.push_back(frame);
      anchor = frame.embedding;
      continue;
    }

    FrameRecord& slot = out.frames.back();
    const PairApproximation approx =
        truncated_svd_rank_k({slot.embedding, frame.embedding}, cfg.rank_k);
    report.total_reconstruction_error += approx.discarded_energy;
    slot.embedding = row_mean(approx);

    const TimeSpan absorbed = frame.merged_span.value_or(TimeSpan{frame.timestamp, frame.timestamp});
    TimeSpan span = slot.merged_span.value_or(TimeSpan{slot.timestamp, slot.timestamp});
    span.start = std::min(span.start, absorbed.start);
    span.end = std::max(span.end, absorbed.end);
    slot.merged_span = span;

    report.merges.push_back({slot.frame_index, frame.frame_index, sim});
    if (cfg.anchor_update == AnchorUpdate::kCompressed) anchor = slot.embedding;
  }

  report.output_count = out.size();
  return {std::move(out), std::move(report)};
}

}  // namespace vmr

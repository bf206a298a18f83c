// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vmr/embeddings.hpp"

namespace vmr {

enum class RequestKind {
  kQaRelevance,         // answer: yes / no
  kCaptionQueryGuided,  // answer: caption text
  kCaptionGeneric,      // answer: caption text
  kEmbedText,           // answer: embedding
  kParseQuery,          // answer: "objects: a, b; actions: c"
};

std::string_view to_string(RequestKind kind) noexcept;
RequestKind parse_request_kind(std::string_view text);

struct ProviderRequest {
  RequestKind kind = RequestKind::kQaRelevance;
  std::optional<std::size_t> segment_id;  // not sent on the wire
  std::string prompt;
  std::optional<std::string> image_ref;
  std::optional<std::string> query;
};

struct ProviderResponse {
  std::variant<bool, std::string, EmbeddingVector> answer;
};

/// Synchronous captioning / QA / embedding backend. Implementations must be
/// safe to call from max_concurrency() threads at once.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual ProviderResponse handle(const ProviderRequest& request) = 0;
  virtual std::size_t max_concurrency() const noexcept { return 1; }
};

// Typed calls; a response of the wrong shape is a provider error.
bool ask_yes_no(Provider& provider, const ProviderRequest& request);
std::string ask_text(Provider& provider, const ProviderRequest& request);
EmbeddingVector ask_embedding(Provider& provider, const ProviderRequest& request);

// Wire schema of the HTTP adapter:
//   request  {"kind": "<kind>", "prompt": "...", "image_ref"?: "...", "query"?: "..."}
//   response {"answer": "yes" | "no" | "<text>" | [reals]}
nlohmann::json encode_request(const ProviderRequest& request);
ProviderRequest decode_request(const nlohmann::json& body);
nlohmann::json encode_response(const ProviderResponse& response);
ProviderResponse decode_response(RequestKind kind, const nlohmann::json& body);

/// Test double answering from per-kind callbacks and recording every request
/// in arrival order. Requests of a kind without a callback fail.
class ScriptedProvider : public Provider {
 public:
  using YesNo = std::function<bool(const ProviderRequest&)>;
  using Text = std::function<std::string(const ProviderRequest&)>;
  using Embed = std::function<EmbeddingVector(const ProviderRequest&)>;
  using Failure = std::function<bool(const ProviderRequest&)>;

  /// Answers every QA question with `answer`, captions with a fixed text per
  /// kind and segment, and embeds text as a hash-seeded Gaussian vector.
  ScriptedProvider& with_defaults(bool answer, std::size_t dimension);

  ScriptedProvider& on_qa(YesNo fn);
  ScriptedProvider& on_caption(Text fn);  // both caption kinds
  ScriptedProvider& on_embed(Embed fn);
  ScriptedProvider& on_parse(Text fn);
  /// Requests for which `fn` returns true throw a provider error.
  ScriptedProvider& fail_when(Failure fn);

  ProviderResponse handle(const ProviderRequest& request) override;

  std::vector<ProviderRequest> transcript() const;
  std::size_t count(RequestKind kind) const;

 private:
  YesNo qa_;
  Text caption_;
  Embed embed_;
  Text parse_;
  Failure failure_;
  mutable std::mutex mutex_;
  std::vector<ProviderRequest> transcript_;
};

/// Deterministic pseudo-provider for benchmarks and the CLI's mock mode.
///  - QA answers are a seeded hash of (segment, prompt) with P(yes) = yes_rate.
///  - Captions are assembled from the segment id and, on the query-guided
///    path, the query text.
///  - Text embeddings are the sum of per-token hash vectors, so texts that
///    share words have correlated embeddings.
/// Stateless, so any number of concurrent calls is allowed.
class HashProvider : public Provider {
 public:
  HashProvider(std::size_t dimension, std::uint64_t seed, double yes_rate = 0.5);

  ProviderResponse handle(const ProviderRequest& request) override;
  std::size_t max_concurrency() const noexcept override { return 8; }

  EmbeddingVector embed(std::string_view text) const;

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
  double yes_rate_;
};

}  // namespace vmr

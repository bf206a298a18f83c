// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/provider.hpp"

#include <cctype>

#include <fmt/format.h>

#include "vmr/error.hpp"
#include "vmr/random.hpp"

namespace vmr {

std::string_view to_string(RequestKind kind) noexcept {
  switch (kind) {
    case RequestKind::kQaRelevance: return "qa_relevance";
    case RequestKind::kCaptionQueryGuided: return "caption_query_guided";
    case RequestKind::kCaptionGeneric: return "caption_generic";
    case RequestKind::kEmbedText: return "embed_text";
    case RequestKind::kParseQuery: return "parse_query";
  }
  return "qa_relevance";
}

RequestKind parse_request_kind(std::string_view text) {
  for (RequestKind k : {RequestKind::kQaRelevance, RequestKind::kCaptionQueryGuided,
                        RequestKind::kCaptionGeneric, RequestKind::kEmbedText,
                        RequestKind::kParseQuery}) {
    if (to_string(k) == text) return k;
  }
  throw Error(ErrorKind::kFormat, fmt::format("unknown request kind '{}'", text));
}

namespace {

template <typename T>
T expect(ProviderResponse response, const ProviderRequest& request, const char* what) {
  if (auto* value = std::get_if<T>(&response.answer)) return std::move(*value);
  throw ProviderError(fmt::format("{} request expected {} answer", to_string(request.kind), what),
                      request.segment_id);
}

}  // namespace

bool ask_yes_no(Provider& provider, const ProviderRequest& request) {
  return expect<bool>(provider.handle(request), request, "a yes/no");
}

std::string ask_text(Provider& provider, const ProviderRequest& request) {
  return expect<std::string>(provider.handle(request), request, "a text");
}

EmbeddingVector ask_embedding(Provider& provider, const ProviderRequest& request) {
  return expect<EmbeddingVector>(provider.handle(request), request, "an embedding");
}

nlohmann::json encode_request(const ProviderRequest& request) {
  nlohmann::json j;
  j["kind"] = to_string(request.kind);
  j["prompt"] = request.prompt;
  if (request.image_ref) j["image_ref"] = *request.image_ref;
  if (request.query) j["query"] = *request.query;
  return j;
}

ProviderRequest decode_request(const nlohmann::json& body) {
  if (!body.is_object() || !body.contains("kind") || !body.contains("prompt") ||
      !body["kind"].is_string() || !body["prompt"].is_string()) {
    throw Error(ErrorKind::kFormat, "provider request needs string fields 'kind' and 'prompt'");
  }
  ProviderRequest request;
  request.kind = parse_request_kind(body["kind"].get<std::string>());
  request.prompt = body["prompt"].get<std::string>();
  if (body.contains("image_ref")) request.image_ref = body["image_ref"].get<std::string>();
  if (body.contains("query")) request.query = body["query"].get<std::string>();
  return request;
}

nlohmann::json encode_response(const ProviderResponse& response) {
  nlohmann::json j;
  std::visit(
      [&j](const auto& value) {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, bool>) {
          j["answer"] = value ? "yes" : "no";
        } else if constexpr (std::is_same_v<T, std::string>) {
          j["answer"] = value;
        } else {
          j["answer"] = std::vector<double>(value.values().begin(), value.values().end());
        }
      },
      response.answer);
  return j;
}

ProviderResponse decode_response(RequestKind kind, const nlohmann::json& body) {
  if (!body.is_object() || !body.contains("answer")) {
    throw ProviderError("provider response has no 'answer' field");
  }
  const nlohmann::json& answer = body["answer"];
  switch (kind) {
    case RequestKind::kQaRelevance: {
      if (answer == "yes") return {true};
      if (answer == "no") return {false};
      throw ProviderError(fmt::format("qa_relevance answer must be \"yes\" or \"no\", got {}",
                                      answer.dump()));
    }
    case RequestKind::kCaptionQueryGuided:
    case RequestKind::kCaptionGeneric:
    case RequestKind::kParseQuery:
      if (!answer.is_string()) throw ProviderError("text answer expected");
      return {answer.get<std::string>()};
    case RequestKind::kEmbedText: {
      if (!answer.is_array()) throw ProviderError("embedding answer must be an array");
      std::vector<double> values;
      for (const auto& v : answer) {
        if (!v.is_number()) throw ProviderError("embedding answer has a non-numeric entry");
        values.push_back(v.get<double>());
      }
      return {EmbeddingVector(std::move(values))};
    }
  }
  throw ProviderError("unhandled request kind");
}

ScriptedProvider& ScriptedProvider::with_defaults(bool answer, std::size_t dimension) {
  return on_qa([answer](const ProviderRequest&) { return answer; })
      .on_caption([](const ProviderRequest& r) {
        return fmt::format("{} caption for segment {}", to_string(r.kind), r.segment_id.value_or(0));
      })
      .on_embed([dimension](const ProviderRequest& r) {
        std::vector<double> v(dimension);
        Rng rng(fnv1a64(r.prompt));
        for (double& x : v) x = rng.normal();
        return EmbeddingVector(std::move(v));
      });
}

ScriptedProvider& ScriptedProvider::on_qa(YesNo fn) {
  qa_ = std::move(fn);
  return *this;
}
ScriptedProvider& ScriptedProvider::on_caption(Text fn) {
  caption_ = std::move(fn);
  return *this;
}
ScriptedProvider& ScriptedProvider::on_embed(Embed fn) {
  embed_ = std::move(fn);
  return *this;
}
ScriptedProvider& ScriptedProvider::on_parse(Text fn) {
  parse_ = std::move(fn);
  return *this;
}
ScriptedProvider& ScriptedProvider::fail_when(Failure fn) {
  failure_ = std::move(fn);
  return *this;
}

ProviderResponse ScriptedProvider::handle(const ProviderRequest& request) {
  {
    std::lock_guard lock(mutex_);
    transcript_.push_back(request);
  }
  if (failure_ && failure_(request)) {
    throw ProviderError(fmt::format("scripted failure on {}", to_string(request.kind)),
                        request.segment_id);
  }
  switch (request.kind) {
    case RequestKind::kQaRelevance:
      if (qa_) return {qa_(request)};
      break;
    case RequestKind::kCaptionQueryGuided:
    case RequestKind::kCaptionGeneric:
      if (caption_) return {caption_(request)};
      break;
    case RequestKind::kEmbedText:
      if (embed_) return {embed_(request)};
      break;
    case RequestKind::kParseQuery:
      if (parse_) return {parse_(request)};
      break;
  }
  throw ProviderError(fmt::format("no script for {}", to_string(request.kind)), request.segment_id);
}

std::vector<ProviderRequest> ScriptedProvider::transcript() const {
  std::lock_guard lock(mutex_);
  return transcript_;
}

std::size_t ScriptedProvider::count(RequestKind kind) const {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (const auto& r : transcript_) n += r.kind == kind ? 1 : 0;
  return n;
}

HashProvider::HashProvider(std::size_t dimension, std::uint64_t seed, double yes_rate)
    : dimension_(dimension), seed_(seed), yes_rate_(yes_rate) {
  if (dimension == 0) throw Error(ErrorKind::kConfig, "hash provider dimension must be >= 1");
  if (!(yes_rate >= 0.0 && yes_rate <= 1.0)) {
    throw Error(ErrorKind::kConfig, "hash provider yes_rate must be in [0, 1]");
  }
}

EmbeddingVector HashProvider::embed(std::string_view text) const {
  std::vector<double> sum(dimension_, 0.0);
  auto add_token = [&](std::string_view token) {
    Rng rng(mix64(fnv1a64(token) ^ seed_));
    for (double& x : sum) x += rng.normal();
  };
  std::string token;
  bool any = false;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      token.push_back(static_cast<char>(std::tolower(c)));
    } else if (!token.empty()) {
      add_token(token);
      any = true;
      token.clear();
    }
  }
  if (!token.empty()) {
    add_token(token);
    any = true;
  }
  if (!any) add_token("");
  return EmbeddingVector(std::move(sum));
}

ProviderResponse HashProvider::handle(const ProviderRequest& request) {
  const std::size_t segment = request.segment_id.value_or(0);
  switch (request.kind) {
    case RequestKind::kQaRelevance: {
      const std::uint64_t h = mix64(fnv1a64(request.prompt) ^ mix64(segment) ^ seed_);
      return {static_cast<double>(h >> 11) * 0x1.0p-53 < yes_rate_};
    }
    case RequestKind::kCaptionQueryGuided:
      return {fmt::format("segment {} shows {}", segment, request.query.value_or(request.prompt))};
    case RequestKind::kCaptionGeneric: {
      static constexpr std::string_view kSubjects[] = {"a person", "a room", "a street", "a group",
                                                       "an object", "a landscape"};
      static constexpr std::string_view kScenes[] = {"indoors", "outdoors", "in motion",
                                                     "close up", "from a distance"};
      const std::uint64_t h = mix64(mix64(segment) ^ seed_);
      return {fmt::format("segment {} shows {} {}", segment, kSubjects[h % 6], kScenes[(h >> 8) % 5])};
    }
    case RequestKind::kEmbedText:
      return {embed(request.prompt)};
    case RequestKind::kParseQuery:
      throw ProviderError("hash provider does not parse queries", request.segment_id);
  }
  throw ProviderError("unhandled request kind", request.segment_id);
}

}  // namespace vmr

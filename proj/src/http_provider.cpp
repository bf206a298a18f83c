// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/http_provider.hpp"

#include <chrono>

#include <fmt/format.h>
#include <httplib.h>

#include "vmr/error.hpp"

namespace vmr {

HttpProvider::HttpProvider(HttpProviderOptions options) : options_(std::move(options)) {
  const std::string& url = options_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0) {
    throw Error(ErrorKind::kConfig, fmt::format("provider endpoint must be an http:// URL, got '{}'", url));
  }
  const auto path_start = url.find('/', scheme_end + 3);
  host_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (options_.retries < 0) throw Error(ErrorKind::kConfig, "provider retries must be >= 0");
  if (!(options_.timeout_sec > 0.0)) throw Error(ErrorKind::kConfig, "provider timeout must be > 0");
  if (options_.max_concurrency == 0) options_.max_concurrency = 1;
}

ProviderResponse HttpProvider::handle(const ProviderRequest& request) {
  // One client per call: httplib clients are not safe to share across threads.
  httplib::Client client(host_);
  const auto timeout = std::chrono::duration<double>(options_.timeout_sec);
  const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
  client.set_connection_timeout(usec);
  client.set_read_timeout(usec);
  client.set_write_timeout(usec);

  const std::string body = encode_request(request).dump();
  std::string last_error;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    auto result = client.Post(path_, body, "application/json");
    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    if (result->status < 200 || result->status >= 300) {
      last_error = fmt::format("HTTP status {}", result->status);
      continue;
    }
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception& e) {
      throw ProviderError(fmt::format("malformed provider response: {}", e.what()), request.segment_id);
    }
    try {
      return decode_response(request.kind, parsed);
    } catch (const ProviderError& e) {
      throw ProviderError(e.detail(), request.segment_id);
    }
  }
  throw ProviderError(fmt::format("{} after {} attempt(s): {}", options_.endpoint,
                                  options_.retries + 1, last_error),
                      request.segment_id);
}

}  // namespace vmr

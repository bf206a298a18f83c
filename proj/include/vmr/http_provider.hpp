// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

#include "vmr/provider.hpp"

namespace vmr {

struct HttpProviderOptions {
  // Full URL of the single endpoint, e.g. "http://127.0.0.1:8080/v1/provider".
  std::string endpoint;
  double timeout_sec = 30.0;
  // Extra attempts after a failed transport or non-2xx status.
  int retries = 2;
  std::size_t max_concurrency = 1;
};

/// Provider speaking the JSON wire schema over HTTP POST.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(HttpProviderOptions options);

  ProviderResponse handle(const ProviderRequest& request) override;
  std::size_t max_concurrency() const noexcept override { return options_.max_concurrency; }

 private:
  HttpProviderOptions options_;
  std::string host_;
  std::string path_;
};

}  // namespace vmr

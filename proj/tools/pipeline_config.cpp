// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "pipeline_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "vmr/error.hpp"
#include "vmr/trace_io.hpp"

namespace vmr::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

double parse_real(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw Error(ErrorKind::kConfig, fmt::format("{}: '{}' is not a finite number", key, value));
  }
  return out;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(ErrorKind::kConfig, fmt::format("{}: '{}' is not a non-negative integer", key, value));
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  svc.validate();
  modulation.validate();
  if (!(caption_interval_sec > 0.0)) {
    throw Error(ErrorKind::kConfig,
                fmt::format("caption_interval_sec must be > 0, got {}", caption_interval_sec));
  }
  if (max_vector_slots == 0) throw Error(ErrorKind::kConfig, "max_vector_slots must be >= 1");
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "theta") {
    svc.theta = parse_real(key, value);
  } else if (key == "rank_k") {
    svc.rank_k = static_cast<int>(parse_unsigned(key, value));
  } else if (key == "anchor_update") {
    if (value == "compressed") {
      svc.anchor_update = AnchorUpdate::kCompressed;
    } else if (value == "original") {
      svc.anchor_update = AnchorUpdate::kOriginal;
    } else {
      throw Error(ErrorKind::kConfig, fmt::format("anchor_update: unknown value '{}'", value));
    }
  } else if (key == "alpha1") {
    modulation.alpha1 = parse_real(key, value);
  } else if (key == "alpha2") {
    modulation.alpha2 = parse_real(key, value);
  } else if (key == "vbar_form") {
    modulation.refined_form = parse_refined_form(value);
  } else if (key == "caption_interval_sec") {
    caption_interval_sec = parse_real(key, value);
  } else if (key == "mode") {
    mode = parse_caption_mode(value);
  } else if (key == "relevance_aggregation") {
    aggregation = parse_relevance_aggregation(value);
  } else if (key == "seed") {
    seed = parse_unsigned(key, value);
  } else if (key == "max_vector_slots" || key == "budget.max_vector_slots") {
    max_vector_slots = value == "none" ? std::numeric_limits<std::size_t>::max()
                                       : static_cast<std::size_t>(parse_unsigned(key, value));
  } else {
    throw Error(ErrorKind::kConfig, fmt::format("unknown config key '{}'", key));
  }
}

void PipelineConfig::merge(std::string_view text, std::string_view origin) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kConfig, fmt::format("{}:{}: expected 'key = value'", origin, line_no));
    }
    try {
      set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorKind::kConfig, fmt::format("{}:{}: {}", origin, line_no, e.detail()));
    }
  }
}

void PipelineConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, fmt::format("cannot open config file {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  merge(buf.str(), path.string());
}

std::string PipelineConfig::to_text() const {
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  line("theta", format_real(svc.theta));
  line("rank_k", std::to_string(svc.rank_k));
  line("anchor_update", svc.anchor_update == AnchorUpdate::kCompressed ? "compressed" : "original");
  line("alpha1", format_real(modulation.alpha1));
  line("alpha2", format_real(modulation.alpha2));
  line("vbar_form", std::string(to_string(modulation.refined_form)));
  line("caption_interval_sec", format_real(caption_interval_sec));
  line("mode", std::string(to_string(mode)));
  line("relevance_aggregation", std::string(to_string(aggregation)));
  line("seed", std::to_string(seed));
  line("max_vector_slots", max_vector_slots == std::numeric_limits<std::size_t>::max()
                               ? std::string("none")
                               : std::to_string(max_vector_slots));
  return out;
}

}  // namespace vmr::cli

// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/trace_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "vmr/error.hpp"

namespace vmr {
namespace {

using nlohmann::json;

json parse_line(const std::string& line, std::size_t line_no) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kFormat, fmt::format("trace line {}: {}", line_no, e.what()));
  }
}

template <typename T>
T field(const json& j, const char* key, std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorKind::kFormat, fmt::format("trace line {}: missing field '{}'", line_no, key));
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::kFormat, fmt::format("trace line {}: bad field '{}'", line_no, key));
  }
}

std::string format_vector(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_real(values[i]);
  }
  out += ']';
  return out;
}

}  // namespace

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = parse_line(line, line_no);
    if (!have_header) {
      trace.header.dimension = field<std::size_t>(j, "dimension", line_no);
      trace.header.duration_sec = field<double>(j, "duration_sec", line_no);
      trace.header.source_id = field<std::string>(j, "source_id", line_no);
      if (j.contains("plateaus")) {
        for (const auto& p : field<std::vector<std::array<std::size_t, 2>>>(j, "plateaus", line_no)) {
          trace.header.plateaus.push_back({p[0], p[1]});
        }
      }
      if (trace.header.dimension == 0) {
        throw Error(ErrorKind::kFormat, "trace header declares dimension 0");
      }
      have_header = true;
      continue;
    }
    FrameRecord frame;
    frame.frame_index = field<std::size_t>(j, "frame_index", line_no);
    frame.timestamp = field<double>(j, "timestamp_sec", line_no);
    frame.embedding = EmbeddingVector(field<std::vector<double>>(j, "embedding", line_no));
    if (frame.embedding.dimension() != trace.header.dimension) {
      throw Error(ErrorKind::kDimension,
                  fmt::format("trace line {}: embedding has dimension {}, header declares {}",
                              line_no, frame.embedding.dimension(), trace.header.dimension));
    }
    if (j.contains("merged_span")) {
      const auto span = field<std::array<double, 2>>(j, "merged_span", line_no);
      frame.merged_span = TimeSpan{span[0], span[1]};
    }
    trace.sequence.frames.push_back(std::move(frame));
  }
  if (!have_header) throw Error(ErrorKind::kEmptyInput, "trace has no header line");
  trace.sequence.duration = trace.header.duration_sec;
  trace.sequence.validate();
  return trace;
}

void write_trace(std::ostream& out, const Trace& trace) {
  const TraceHeader& h = trace.header;
  out << "{\"dimension\":" << h.dimension << ",\"duration_sec\":" << format_real(h.duration_sec)
      << ",\"source_id\":" << json(h.source_id).dump();
  if (!h.plateaus.empty()) {
    out << ",\"plateaus\":[";
    for (std::size_t i = 0; i < h.plateaus.size(); ++i) {
      if (i) out << ',';
      out << '[' << h.plateaus[i].first << ',' << h.plateaus[i].last << ']';
    }
    out << ']';
  }
  out << "}\n";
  for (const FrameRecord& f : trace.sequence.frames) {
    out << "{\"frame_index\":" << f.frame_index << ",\"timestamp_sec\":" << format_real(f.timestamp)
        << ",\"embedding\":" << format_vector(f.embedding.values());
    if (f.merged_span) {
      out << ",\"merged_span\":[" << format_real(f.merged_span->start) << ','
          << format_real(f.merged_span->end) << ']';
    }
    out << "}\n";
  }
}

Trace read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, fmt::format("cannot open trace '{}'", path.string()));
  return read_trace(in);
}

void write_trace_file(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, fmt::format("cannot write trace '{}'", path.string()));
  write_trace(out, trace);
  if (!out) throw Error(ErrorKind::kIo, fmt::format("write failed for '{}'", path.string()));
}

}  // namespace vmr

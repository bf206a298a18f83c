// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "vmr/error.hpp"
#include "vmr/random.hpp"
#include "vmr/synthetic.hpp"
#include "vmr/trace_io.hpp"

namespace vmr {
namespace {

std::string written(const Trace& t) {
  std::ostringstream out;
  write_trace(out, t);
  return out.str();
}

TEST(TraceIo, ReadsHandWrittenFile) {
  std::istringstream in(
      "{\"dimension\":2,\"duration_sec\":4,\"source_id\":\"vid\"}\n"
      "{\"frame_index\":0,\"timestamp_sec\":0.5,\"embedding\":[1,0]}\n"
      "{\"frame_index\":3,\"timestamp_sec\":2.5,\"embedding\":[0.25,-1e-3],\"merged_span\":[2.5,3.5]}\n");
  const Trace t = read_trace(in);
  EXPECT_EQ(t.header.dimension, 2u);
  EXPECT_EQ(t.header.source_id, "vid");
  ASSERT_EQ(t.sequence.size(), 2u);
  EXPECT_EQ(t.sequence.frames[1].frame_index, 3u);
  EXPECT_EQ(t.sequence.frames[1].embedding[1], -1e-3);
  ASSERT_TRUE(t.sequence.frames[1].merged_span.has_value());
  EXPECT_EQ(t.sequence.frames[1].merged_span->end, 3.5);
  EXPECT_EQ(t.sequence.duration, 4.0);
}

TEST(TraceIo, RoundTripIsByteExact) {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    PlateauTraceSpec spec;
    spec.frames = 1 + rng.below(40);
    spec.dimension = 1 + rng.below(16);
    spec.plateaus = 1 + rng.below(spec.frames);
    spec.noise = 0.1 * rng.uniform();
    spec.frame_interval = 0.1 + rng.uniform();
    spec.seed = rng.next();
    Trace t = generate_plateau_trace(spec);
    t.sequence.frames[0].merged_span = TimeSpan{0.0, 1.0 / 3.0};
    const std::string first = written(t);
    std::istringstream in(first);
    const Trace back = read_trace(in);
    EXPECT_EQ(back, t);
    EXPECT_EQ(written(back), first);
  }
}

TEST(TraceIo, Errors) {
  auto kind_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_trace(in);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIo;
  };
  EXPECT_EQ(kind_of(""), ErrorKind::kEmptyInput);
  EXPECT_EQ(kind_of("{not json}\n"), ErrorKind::kFormat);
  EXPECT_EQ(kind_of("{\"dimension\":2,\"duration_sec\":1}\n"), ErrorKind::kFormat);
  EXPECT_EQ(kind_of("{\"dimension\":2,\"duration_sec\":1,\"source_id\":\"a\"}\n"
                    "{\"frame_index\":0,\"timestamp_sec\":0,\"embedding\":[1,2,3]}\n"),
            ErrorKind::kDimension);
  EXPECT_EQ(kind_of("{\"dimension\":1,\"duration_sec\":5,\"source_id\":\"a\"}\n"
                    "{\"frame_index\":0,\"timestamp_sec\":2,\"embedding\":[1]}\n"
                    "{\"frame_index\":1,\"timestamp_sec\":1,\"embedding\":[1]}\n"),
            ErrorKind::kOrdering);
}

TEST(SyntheticTrace, NoiseFreePlateausAreExactDuplicates) {
  PlateauTraceSpec spec;
  spec.frames = 12;
  spec.dimension = 8;
  spec.plateaus = 3;
  spec.seed = 5;
  const Trace t = generate_plateau_trace(spec);
  ASSERT_EQ(t.header.plateaus.size(), 3u);
  for (const auto& p : t.header.plateaus) {
    for (std::size_t i = p.first; i <= p.last; ++i) {
      EXPECT_EQ(cosine_similarity(t.sequence.frames[p.first].embedding, t.sequence.frames[i].embedding), 1.0);
    }
  }
  // Orthonormal bases: distinct plateaus are orthogonal.
  EXPECT_NEAR(cosine_similarity(t.sequence.frames[0].embedding, t.sequence.frames[11].embedding), 0.0, 1e-12);
}

TEST(SyntheticTrace, PlateauSizesAndDeterminism) {
  PlateauTraceSpec spec;
  spec.frames = 10;
  spec.plateaus = 3;
  spec.noise = 0.05;
  spec.seed = 77;
  const Trace a = generate_plateau_trace(spec);
  const std::vector<PlateauRange> expected = {{0, 3}, {4, 6}, {7, 9}};
  EXPECT_EQ(a.header.plateaus, expected);
  EXPECT_EQ(written(a), written(generate_plateau_trace(spec)));
  spec.seed = 78;
  EXPECT_NE(written(a), written(generate_plateau_trace(spec)));
}

TEST(SyntheticTrace, RejectsBadShapes) {
  PlateauTraceSpec spec;
  spec.frames = 3;
  spec.plateaus = 4;
  EXPECT_THROW(generate_plateau_trace(spec), Error);
  spec.plateaus = 0;
  EXPECT_THROW(generate_plateau_trace(spec), Error);
  spec.plateaus = 1;
  spec.frames = 0;
  EXPECT_THROW(generate_plateau_trace(spec), Error);
}

}  // namespace
}  // namespace vmr

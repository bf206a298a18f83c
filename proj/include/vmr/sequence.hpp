// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vmr/embeddings.hpp"
#include "vmr/modulation.hpp"

namespace vmr {

enum class SlotKind { kTime, kFrame, kCaption, kDurationMeta, kQuery, kInstruction };

std::string_view to_string(SlotKind kind) noexcept;

/// Integer seconds for time / duration slots, a vector for frame / caption
/// slots, text for query / instruction slots.
using SlotPayload = std::variant<std::int64_t, EmbeddingVector, std::string>;

struct TokenSlot {
  SlotKind kind = SlotKind::kTime;
  SlotPayload payload;
  // frame_index for time / frame slots, segment_id for caption slots.
  std::optional<std::size_t> source_ref;
};

struct MemoryBudget {
  std::size_t max_vector_slots = std::numeric_limits<std::size_t>::max();
  std::size_t used_vector_slots = 0;
  std::size_t used_text_chars = 0;
};

struct InterleavedSequence {
  std::vector<TokenSlot> slots;
  MemoryBudget budget;
};

/// Round half away from zero.
std::int64_t round_seconds(double seconds);

/// Emits [time, frame] pairs in time order, each caption right after the
/// frame nearest its segment midpoint (ties to the earlier frame, captions
/// keep input order), then duration, query and instruction. With no frames
/// the captions are emitted in input order before the tail.
///
/// Throws an ordering error for unsorted frames and a budget error when
/// frames + captions exceed budget.max_vector_slots.
InterleavedSequence assemble(const FrameSequence& frames, std::span<const ScoredCaption> captions,
                             std::string_view query, std::string_view instruction,
                             MemoryBudget budget);

/// Recounts vector slots and text characters from the slots themselves.
MemoryBudget footprint(const InterleavedSequence& seq);

// Manifest: a header line then one tab-separated line per slot,
//   <index> <kind> <payload> <source_ref>
// payload is the integer for time / duration_meta, "@<byte offset>+<dim>"
// into the sidecar for frame / caption, and a JSON string for text. The
// sidecar is the concatenation of all vectors as little-endian float32.
void write_manifest(const InterleavedSequence& seq, std::ostream& manifest, std::ostream& sidecar,
                    std::string_view sidecar_name);

}  // namespace vmr

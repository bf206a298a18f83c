// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/sequence.hpp"

#include <bit>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "vmr/error.hpp"

namespace vmr {

std::string_view to_string(SlotKind kind) noexcept {
  switch (kind) {
    case SlotKind::kTime: return "time";
    case SlotKind::kFrame: return "frame";
    case SlotKind::kCaption: return "caption";
    case SlotKind::kDurationMeta: return "duration_meta";
    case SlotKind::kQuery: return "query";
    case SlotKind::kInstruction: return "instruction";
  }
  return "time";
}

std::int64_t round_seconds(double seconds) { return std::llround(seconds); }

InterleavedSequence assemble(const FrameSequence& frames, std::span<const ScoredCaption> captions,
                             std::string_view query, std::string_view instruction,
                             MemoryBudget budget) {
  const auto& fs = frames.frames;
  for (std::size_t i = 1; i < fs.size(); ++i) {
    if (!(fs[i - 1].timestamp < fs[i].timestamp)) {
      throw Error(ErrorKind::kOrdering,
                  fmt::format("frame {} at {}s does not follow frame {} at {}s", fs[i].frame_index,
                              fs[i].timestamp, fs[i - 1].frame_index, fs[i - 1].timestamp));
    }
  }
  const std::size_t required = fs.size() + captions.size();
  if (required > budget.max_vector_slots) {
    throw BudgetError(required - budget.max_vector_slots, required, budget.max_vector_slots);
  }

  // Captions attached to each frame, in input order.
  std::vector<std::vector<std::size_t>> attached(fs.size());
  for (std::size_t c = 0; c < captions.size(); ++c) {
    if (auto f = nearest_frame(fs, captions[c].caption.segment.span.midpoint())) {
      attached[*f].push_back(c);
    }
  }

  InterleavedSequence seq;
  seq.slots.reserve(2 * fs.size() + captions.size() + 3);
  auto push_caption = [&](std::size_t c) {
    seq.slots.push_back({SlotKind::kCaption, captions[c].reweighted_embedding,
                         captions[c].caption.segment.segment_id});
  };
  for (std::size_t i = 0; i < fs.size(); ++i) {
    seq.slots.push_back({SlotKind::kTime, round_seconds(fs[i].timestamp), fs[i].frame_index});
    seq.slots.push_back({SlotKind::kFrame, fs[i].embedding, fs[i].frame_index});
    for (std::size_t c : attached[i]) push_caption(c);
  }
  if (fs.empty()) {
    for (std::size_t c = 0; c < captions.size(); ++c) push_caption(c);
  }
  seq.slots.push_back({SlotKind::kDurationMeta, round_seconds(frames.duration), std::nullopt});
  seq.slots.push_back({SlotKind::kQuery, std::string(query), std::nullopt});
  seq.slots.push_back({SlotKind::kInstruction, std::string(instruction), std::nullopt});

  seq.budget = budget;
  seq.budget.used_vector_slots = required;
  seq.budget.used_text_chars = query.size() + instruction.size();
  return seq;
}

MemoryBudget footprint(const InterleavedSequence& seq) {
  MemoryBudget snapshot;
  snapshot.max_vector_slots = seq.budget.max_vector_slots;
  for (const TokenSlot& slot : seq.slots) {
    if (std::holds_alternative<EmbeddingVector>(slot.payload)) snapshot.used_vector_slots += 1;
    if (const auto* text = std::get_if<std::string>(&slot.payload)) {
      snapshot.used_text_chars += text->size();
    }
  }
  return snapshot;
}

void write_manifest(const InterleavedSequence& seq, std::ostream& manifest, std::ostream& sidecar,
                    std::string_view sidecar_name) {
  manifest << "# vmr-manifest v1 sidecar=" << sidecar_name << " dtype=float32le slots="
           << seq.slots.size() << " vector_slots=" << seq.budget.used_vector_slots << '\n';
  std::uint64_t offset = 0;
  for (std::size_t i = 0; i < seq.slots.size(); ++i) {
    const TokenSlot& slot = seq.slots[i];
    std::string payload;
    if (const auto* seconds = std::get_if<std::int64_t>(&slot.payload)) {
      payload = std::to_string(*seconds);
    } else if (const auto* vec = std::get_if<EmbeddingVector>(&slot.payload)) {
      payload = fmt::format("@{}+{}", offset, vec->dimension());
      for (double v : vec->values()) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        const char bytes[4] = {static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
                               static_cast<char>((bits >> 16) & 0xff),
                               static_cast<char>((bits >> 24) & 0xff)};
        sidecar.write(bytes, 4);
      }
      offset += 4 * vec->dimension();
    } else {
      payload = nlohmann::json(std::get<std::string>(slot.payload)).dump();
    }
    manifest << i << '\t' << to_string(slot.kind) << '\t' << payload << '\t'
             << (slot.source_ref ? std::to_string(*slot.source_ref) : std::string("-")) << '\n';
  }
}

}  // namespace vmr

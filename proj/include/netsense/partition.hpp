/*
 * Copyright (c) 2026 The netsense Authors
 *
 * Licensed under the Apache License Version 2.0 with LLVM Exceptions
 * (the "License"); you may not use this file except in compliance with
 * the License. You may obtain a copy of the License at
 *
 *   https://llvm.org/LICENSE.txt
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace netsense {

// A contiguous index range [offset, offset + length).
struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;

  constexpr std::size_t end() const noexcept { return offset + length; }
  friend constexpr bool operator==(const Span&, const Span&) = default;
};

/// Piece `part` of `parts` when `whole` is split evenly; the first
/// (whole.length % parts) pieces carry one extra element.
constexpr Span even_piece(Span whole, std::size_t parts, std::size_t part) noexcept {
  const std::size_t base = whole.length / parts;
  const std::size_t extra = whole.length % parts;
  const std::size_t offset = whole.offset + part * base + (part < extra ? part : extra);
  return Span{offset, base + (part < extra ? 1 : 0)};
}

inline std::vector<Span> split_even(Span whole, std::size_t parts) {
  if (parts == 0) {
    throw std::invalid_argument("split_even: part count must be positive");
  }
  std::vector<Span> out;
  out.reserve(parts);
  for (std::size_t p = 0; p < parts; ++p) {
    out.push_back(even_piece(whole, parts, p));
  }
  return out;
}

/// Even split of a container of `total_len` elements across resources.
struct PartitionPlan {
  std::size_t total_len = 0;
  std::vector<Span> spans;  // one per resource, ordered by resource id

  std::size_t resource_count() const noexcept { return spans.size(); }
  friend bool operator==(const PartitionPlan&, const PartitionPlan&) = default;
};

struct Batch {
  std::size_t resource_id = 0;
  std::size_t batch_index = 0;
  Span view;  // absolute offsets into the partitioned container

  friend constexpr bool operator==(const Batch&, const Batch&) = default;
};

inline PartitionPlan partition_even(std::size_t total_len, std::size_t resource_count) {
  if (resource_count == 0) {
    throw std::invalid_argument("partition_even: resource count must be positive");
  }
  return PartitionPlan{total_len, split_even(Span{0, total_len}, resource_count)};
}

/// Sub-partitions every resource span into `batch_count` sequential batches.
/// Output is resource-major: all batches of resource 0, then resource 1, ...
/// Batches may be empty when `batch_count` exceeds a span's length.
inline std::vector<Batch> make_batches(const PartitionPlan& plan, std::size_t batch_count) {
  if (batch_count == 0) {
    throw std::invalid_argument("make_batches: batch count must be positive");
  }
  std::vector<Batch> out;
  out.reserve(plan.spans.size() * batch_count);
  for (std::size_t r = 0; r < plan.spans.size(); ++r) {
    for (std::size_t b = 0; b < batch_count; ++b) {
      out.push_back(Batch{r, b, even_piece(plan.spans[r], batch_count, b)});
    }
  }
  return out;
}

}  // namespace netsense

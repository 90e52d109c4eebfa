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

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace netsense {

using address_t = std::uint32_t;
using count_t = std::int64_t;

struct PacketRecord {
  address_t src = 0;
  address_t dst = 0;
  bool valid = true;

  friend constexpr bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

namespace detail {

// Unbiased draw from [0, bound) (Lemire's multiply-shift with rejection).
// Spelled out instead of std::uniform_int_distribution so that generated
// datasets are identical across standard library implementations.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

inline double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Synthetic packet stream: src and dst uniform over [0, address_space).
/// Each packet is independently marked invalid with probability
/// `invalid_fraction`; with the default of 0 every packet is valid.
inline std::vector<PacketRecord> generate_packets(std::uint64_t n, std::uint64_t address_space, std::uint64_t seed,
                                                  double invalid_fraction = 0.0) {
  if (address_space == 0 || address_space > (std::uint64_t{1} << 32)) {
    throw std::invalid_argument("generate_packets: address space must be in [1, 2^32]");
  }
  if (!(invalid_fraction >= 0.0 && invalid_fraction <= 1.0)) {
    throw std::invalid_argument("generate_packets: invalid fraction must be in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::vector<PacketRecord> out;
  out.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    PacketRecord p;
    p.src = static_cast<address_t>(detail::bounded(rng, address_space));
    p.dst = static_cast<address_t>(detail::bounded(rng, address_space));
    if (invalid_fraction > 0.0) {
      p.valid = detail::unit_interval(rng) >= invalid_fraction;
    }
    out.push_back(p);
  }
  return out;
}

// Injective relabeling raw address -> dense anonymized index.
class AnonymizationMap {
 public:
  AnonymizationMap() = default;
  AnonymizationMap(std::uint64_t key, std::unordered_map<address_t, address_t> mapping)
      : key_(key), mapping_(std::move(mapping)) {}

  std::uint64_t key() const noexcept { return key_; }
  std::size_t size() const noexcept { return mapping_.size(); }
  bool empty() const noexcept { return mapping_.empty(); }

  bool contains(address_t raw) const { return mapping_.contains(raw); }
  address_t at(address_t raw) const { return mapping_.at(raw); }
  const std::unordered_map<address_t, address_t>& entries() const noexcept { return mapping_; }

 private:
  std::uint64_t key_ = 0;
  std::unordered_map<address_t, address_t> mapping_;
};

struct AnonymizedStream {
  std::vector<PacketRecord> packets;
  AnonymizationMap map;
};

/// Addresses are ranked in first-seen order (src before dst within a
/// record), then the ranks are shuffled by a permutation keyed on `key`.
/// Anonymized indices are dense in [0, distinct address count).
inline AnonymizedStream anonymize(std::span<const PacketRecord> packets, std::uint64_t key) {
  AnonymizedStream out;
  std::unordered_map<address_t, address_t> mapping;

  std::vector<address_t> first_seen;
  auto rank = [&](address_t raw) {
    auto [it, inserted] = mapping.try_emplace(raw, static_cast<address_t>(first_seen.size()));
    if (inserted) {
      first_seen.push_back(raw);
    }
    return it->second;
  };
  out.packets.reserve(packets.size());
  for (const auto& p : packets) {
    const address_t s = rank(p.src);
    const address_t d = rank(p.dst);
    out.packets.push_back(PacketRecord{s, d, p.valid});
  }

  // Fisher-Yates over the ranks.
  std::vector<address_t> permutation(first_seen.size());
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    permutation[i] = static_cast<address_t>(i);
  }
  std::mt19937_64 rng(key);
  for (std::size_t i = permutation.size(); i > 1; --i) {
    std::swap(permutation[i - 1], permutation[detail::bounded(rng, i)]);
  }

  for (auto& [raw, idx] : mapping) {
    idx = permutation[idx];
  }
  for (auto& p : out.packets) {
    p.src = permutation[p.src];
    p.dst = permutation[p.dst];
  }
  out.map = AnonymizationMap(key, std::move(mapping));
  return out;
}

/// Windowed packet-count matrix in CSR form. values[k] is the number of
/// packets from row i to col_idx[k] for k in [row_ptr[i], row_ptr[i+1]).
struct TrafficMatrix {
  std::int64_t window_id = 0;
  std::uint64_t dim = 1;
  std::vector<std::uint64_t> row_ptr{0, 0};
  std::vector<address_t> col_idx;
  std::vector<count_t> values;

  std::size_t nnz() const noexcept { return values.size(); }

  friend bool operator==(const TrafficMatrix&, const TrafficMatrix&) = default;
};

class malformed_matrix : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws malformed_matrix when the CSR arrays break a structural invariant.
inline void validate(const TrafficMatrix& m) {
  auto fail = [&](const std::string& what) {
    throw malformed_matrix("malformed CSR (window " + std::to_string(m.window_id) + "): " + what);
  };
  if (m.dim == 0) fail("dimension must be positive");
  if (m.row_ptr.size() != m.dim + 1) fail("row_ptr length must be dim + 1");
  if (m.row_ptr.front() != 0) fail("row_ptr[0] must be 0");
  if (m.col_idx.size() != m.values.size()) fail("col_idx and values differ in length");
  if (m.row_ptr.back() != m.values.size()) fail("row_ptr[dim] must equal nnz");
  for (std::uint64_t i = 0; i < m.dim; ++i) {
    const auto begin = m.row_ptr[i];
    const auto end = m.row_ptr[i + 1];
    if (end < begin) fail("row_ptr decreases at row " + std::to_string(i));
    if (end > m.values.size()) fail("row_ptr exceeds nnz at row " + std::to_string(i));
    for (auto k = begin; k < end; ++k) {
      if (m.col_idx[k] >= m.dim) fail("column index out of range in row " + std::to_string(i));
      if (k > begin && m.col_idx[k] <= m.col_idx[k - 1]) fail("columns not strictly increasing in row " + std::to_string(i));
      if (m.values[k] < 1) fail("nonpositive value in row " + std::to_string(i));
    }
  }
}

/// Sorts (src, dst) pairs of one window and run-length counts them into CSR.
inline TrafficMatrix build_matrix(std::span<const PacketRecord> window, std::uint64_t dim, std::int64_t window_id) {
  std::vector<std::uint64_t> keys;
  keys.reserve(window.size());
  for (const auto& p : window) {
    if (p.valid) {
      keys.push_back((std::uint64_t{p.src} << 32) | p.dst);
    }
  }
  std::sort(keys.begin(), keys.end());

  TrafficMatrix m;
  m.window_id = window_id;
  m.dim = dim;
  m.row_ptr.assign(dim + 1, 0);
  for (std::size_t k = 0; k < keys.size();) {
    std::size_t run = k + 1;
    while (run < keys.size() && keys[run] == keys[k]) ++run;
    const auto row = keys[k] >> 32;
    m.col_idx.push_back(static_cast<address_t>(keys[k] & 0xffffffffu));
    m.values.push_back(static_cast<count_t>(run - k));
    ++m.row_ptr[row + 1];
    k = run;
  }
  for (std::uint64_t i = 0; i < dim; ++i) {
    m.row_ptr[i + 1] += m.row_ptr[i];
  }
  return m;
}

// One past the largest address in the stream (at least 1).
inline std::uint64_t address_extent(std::span<const PacketRecord> packets) {
  std::uint64_t dim = 1;
  for (const auto& p : packets) {
    dim = std::max<std::uint64_t>(dim, std::uint64_t{std::max(p.src, p.dst)} + 1);
  }
  return dim;
}

/// Packet k goes to window k / window_size (invalid packets keep their slot
/// but are not counted). All matrices share dimension `address_extent`.
inline std::vector<TrafficMatrix> build_matrices(std::span<const PacketRecord> packets, std::uint64_t window_size) {
  if (window_size == 0) {
    throw std::invalid_argument("build_matrices: window size must be positive");
  }
  const std::uint64_t dim = address_extent(packets);
  std::vector<TrafficMatrix> out;
  for (std::uint64_t begin = 0, t = 0; begin < packets.size(); begin += window_size, ++t) {
    const auto len = std::min<std::uint64_t>(window_size, packets.size() - begin);
    out.push_back(build_matrix(packets.subspan(begin, len), dim, static_cast<std::int64_t>(t)));
  }
  return out;
}

struct Edge {
  address_t src = 0;
  address_t dst = 0;
  friend constexpr bool operator==(const Edge&, const Edge&) = default;
};

struct IndexedSum {
  address_t index = 0;
  count_t sum = 0;
  friend constexpr bool operator==(const IndexedSum&, const IndexedSum&) = default;
};

/// Flat container view of one matrix: every container is a contiguous
/// sequence that the analytics reduce over directly.
struct FlatContainers {
  std::vector<Edge> edges;            // one per nonzero, row-major
  std::vector<count_t> weights;       // aligned with edges
  std::vector<count_t> out_degrees;   // per nonzero row, ascending row
  std::vector<count_t> in_degrees;    // per nonzero column, ascending column
  std::vector<IndexedSum> row_sums;   // (row, packets) for rows with packets
  std::vector<IndexedSum> col_sums;   // (col, packets) for columns with packets

  friend bool operator==(const FlatContainers&, const FlatContainers&) = default;
};

inline FlatContainers to_flat(const TrafficMatrix& m) {
  validate(m);
  FlatContainers f;
  f.edges.reserve(m.nnz());
  f.weights.reserve(m.nnz());

  std::vector<count_t> col_degree(m.dim, 0);
  std::vector<count_t> col_sum(m.dim, 0);
  for (std::uint64_t i = 0; i < m.dim; ++i) {
    const auto begin = m.row_ptr[i];
    const auto end = m.row_ptr[i + 1];
    if (begin == end) continue;
    count_t sum = 0;
    for (auto k = begin; k < end; ++k) {
      f.edges.push_back(Edge{static_cast<address_t>(i), m.col_idx[k]});
      f.weights.push_back(m.values[k]);
      sum += m.values[k];
      ++col_degree[m.col_idx[k]];
      col_sum[m.col_idx[k]] += m.values[k];
    }
    f.out_degrees.push_back(static_cast<count_t>(end - begin));
    f.row_sums.push_back(IndexedSum{static_cast<address_t>(i), sum});
  }
  for (std::uint64_t j = 0; j < m.dim; ++j) {
    if (col_degree[j] == 0) continue;
    f.in_degrees.push_back(col_degree[j]);
    f.col_sums.push_back(IndexedSum{static_cast<address_t>(j), col_sum[j]});
  }
  return f;
}

}  // namespace netsense

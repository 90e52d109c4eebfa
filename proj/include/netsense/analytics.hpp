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

#include <netsense/exec/sender.hpp>
#include <netsense/partition.hpp>
#include <netsense/traffic_matrix.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netsense {

/// Aggregate packet measures of one traffic matrix (or a dataset total).
struct AggregateReport {
  count_t valid_packets = 0;        // sum of all A(i,j)
  count_t unique_links = 0;         // nonzero entries
  count_t unique_sources = 0;       // rows with packets
  count_t max_fanout = 0;           // max distinct destinations of one source
  count_t unique_destinations = 0;  // columns with packets
  count_t max_fanin = 0;            // max distinct sources of one destination

  friend constexpr bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

inline nlohmann::json to_json(const AggregateReport& r) {
  return {{"valid_packets", r.valid_packets},         {"unique_links", r.unique_links},
          {"unique_sources", r.unique_sources},       {"max_fanout", r.max_fanout},
          {"unique_destinations", r.unique_destinations}, {"max_fanin", r.max_fanin}};
}

inline AggregateReport report_from_json(const nlohmann::json& j) {
  AggregateReport r;
  r.valid_packets = j.at("valid_packets").get<count_t>();
  r.unique_links = j.at("unique_links").get<count_t>();
  r.unique_sources = j.at("unique_sources").get<count_t>();
  r.max_fanout = j.at("max_fanout").get<count_t>();
  r.unique_destinations = j.at("unique_destinations").get<count_t>();
  r.max_fanin = j.at("max_fanin").get<count_t>();
  return r;
}

// "key=value" pairs separated by single spaces, fields in declaration order.
inline std::string to_text(const AggregateReport& r) {
  return "valid_packets=" + std::to_string(r.valid_packets) + " unique_links=" + std::to_string(r.unique_links) +
         " unique_sources=" + std::to_string(r.unique_sources) + " max_fanout=" + std::to_string(r.max_fanout) +
         " unique_destinations=" + std::to_string(r.unique_destinations) +
         " max_fanin=" + std::to_string(r.max_fanin);
}

namespace detail {

struct sum_op {
  static constexpr count_t identity = 0;
  constexpr count_t operator()(count_t a, count_t b) const noexcept { return a + b; }
};

struct max_op {
  static constexpr count_t identity = std::numeric_limits<count_t>::min();
  constexpr count_t operator()(count_t a, count_t b) const noexcept { return a < b ? b : a; }
};

// The batch loop: the container is split evenly across the scheduler's
// resources, each resource span into `batch_count` batches. Batch b of every
// resource is pushed as one bulk launch and awaited before batch b + 1.
// Within a launch each resource splits its batch across its workers; every
// bulk index owns one partial slot. After sync_wait the caller folds the
// partials into the per-resource accumulators, and the accumulators into
// the result once all batches are done.
template <class Op>
count_t batched_reduce(std::span<const count_t> data, const exec::Scheduler& sched, std::size_t batch_count, Op op) {
  if (batch_count == 0) {
    throw std::invalid_argument("batch count must be positive");
  }
  const std::size_t resources = sched.resource_count();
  const std::size_t lanes = sched.workers_per_resource();
  const std::vector<Batch> batches = make_batches(partition_even(data.size(), resources), batch_count);

  std::vector<count_t> per_resource(resources, Op::identity);
  std::vector<count_t> partials(resources * lanes, Op::identity);

  auto reduce_lane = [&batches, batch_count, lanes, op](std::size_t index, std::size_t resource_id,
                                                        std::span<const count_t> values, std::span<count_t> slots,
                                                        std::size_t batch) {
    const Span batch_view = batches[resource_id * batch_count + batch].view;
    const Span lane = even_piece(batch_view, lanes, index - resource_id * lanes);
    const auto sub = values.subspan(lane.offset, lane.length);
    slots[index] = std::reduce(sub.begin(), sub.end(), Op::identity, op);
  };

  for (std::size_t b = 0; b < batch_count; ++b) {
    auto sndr = exec::just(data, std::span<count_t>(partials), b) |
                exec::exec_on(sched, exec::bulk(resources * lanes, reduce_lane));
    exec::sync_wait(std::move(sndr));
    for (std::size_t r = 0; r < resources; ++r) {
      for (std::size_t l = 0; l < lanes; ++l) {
        per_resource[r] = op(per_resource[r], partials[r * lanes + l]);
      }
    }
  }
  return std::reduce(per_resource.begin(), per_resource.end(), Op::identity, op);
}

}  // namespace detail

/// Sum of `data`; 0 for an empty view.
inline count_t sum_reduce(std::span<const count_t> data, const exec::Scheduler& sched, std::size_t batch_count) {
  return detail::batched_reduce(data, sched, batch_count, detail::sum_op{});
}

/// Maximum of `data`; 0 for an empty view.
inline count_t max_scan(std::span<const count_t> data, const exec::Scheduler& sched, std::size_t batch_count) {
  if (data.empty()) {
    if (batch_count == 0) throw std::invalid_argument("batch count must be positive");
    return 0;
  }
  return detail::batched_reduce(data, sched, batch_count, detail::max_op{});
}

inline AggregateReport analyze_matrix(const FlatContainers& f, const exec::Scheduler& sched, std::size_t batch_count) {
  AggregateReport r;
  r.valid_packets = sum_reduce(f.weights, sched, batch_count);
  r.unique_links = static_cast<count_t>(f.edges.size());
  r.unique_sources = static_cast<count_t>(f.row_sums.size());
  r.max_fanout = max_scan(f.out_degrees, sched, batch_count);
  r.unique_destinations = static_cast<count_t>(f.col_sums.size());
  r.max_fanin = max_scan(f.in_degrees, sched, batch_count);
  return r;
}

struct DatasetReport {
  std::vector<AggregateReport> per_matrix;
  AggregateReport totals;
};

/// Folds per-matrix reports: counts add up, fan-out/fan-in take the max.
/// Sources and destinations are counted per window, not deduplicated
/// across windows.
inline AggregateReport combine_totals(std::span<const AggregateReport> reports) {
  AggregateReport t;
  for (const auto& r : reports) {
    t.valid_packets += r.valid_packets;
    t.unique_links += r.unique_links;
    t.unique_sources += r.unique_sources;
    t.unique_destinations += r.unique_destinations;
    t.max_fanout = std::max(t.max_fanout, r.max_fanout);
    t.max_fanin = std::max(t.max_fanin, r.max_fanin);
  }
  return t;
}

inline DatasetReport analyze_dataset(std::span<const FlatContainers> matrices, const exec::Scheduler& sched,
                                     std::size_t batch_count) {
  DatasetReport out;
  out.per_matrix.reserve(matrices.size());
  for (const auto& f : matrices) {
    out.per_matrix.push_back(analyze_matrix(f, sched, batch_count));
  }
  out.totals = combine_totals(out.per_matrix);
  return out;
}

inline DatasetReport analyze_dataset(std::span<const TrafficMatrix> matrices, const exec::Scheduler& sched,
                                     std::size_t batch_count) {
  std::vector<FlatContainers> flat;
  flat.reserve(matrices.size());
  for (const auto& m : matrices) {
    flat.push_back(to_flat(m));
  }
  return analyze_dataset(std::span<const FlatContainers>(flat), sched, batch_count);
}

/// Reference evaluation straight from (src, dst) pairs with ordered
/// containers. No matrix, no scheduler.
inline AggregateReport oracle_analyze(std::span<const PacketRecord> window) {
  std::set<std::pair<address_t, address_t>> links;
  std::map<address_t, std::set<address_t>> destinations_of;
  std::map<address_t, std::set<address_t>> sources_of;
  AggregateReport r;
  for (const auto& p : window) {
    if (!p.valid) continue;
    ++r.valid_packets;
    links.emplace(p.src, p.dst);
    destinations_of[p.src].insert(p.dst);
    sources_of[p.dst].insert(p.src);
  }
  r.unique_links = static_cast<count_t>(links.size());
  r.unique_sources = static_cast<count_t>(destinations_of.size());
  r.unique_destinations = static_cast<count_t>(sources_of.size());
  for (const auto& [src, dsts] : destinations_of) {
    r.max_fanout = std::max(r.max_fanout, static_cast<count_t>(dsts.size()));
  }
  for (const auto& [dst, srcs] : sources_of) {
    r.max_fanin = std::max(r.max_fanin, static_cast<count_t>(srcs.size()));
  }
  return r;
}

}  // namespace netsense

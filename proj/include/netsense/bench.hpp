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

#include <netsense/analytics.hpp>
#include <netsense/dataset.hpp>
#include <netsense/exec/scheduler.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace netsense::bench {

using clock = std::chrono::steady_clock;

inline double seconds_since(clock::time_point start) {
  return std::chrono::duration<double>(clock::now() - start).count();
}

struct BenchConfig {
  std::size_t resources = 1;
  std::size_t workers_per_resource = 1;
  std::size_t batches = 1;
  std::uint64_t window_size = 0;
  std::uint64_t packets = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const BenchConfig&, const BenchConfig&) = default;
};

/// One timed analysis. Times are wall-clock seconds.
struct BenchResult {
  double analysis_time = 0.0;    // analyze_dataset only
  double end_to_end_time = 0.0;  // load + preprocessing + analysis + report
  count_t packet_count = 0;
  double packet_rate = 0.0;      // packet_count / end_to_end_time
  BenchConfig config;
};

inline double packet_rate(count_t packets, double end_to_end_seconds) {
  if (!(end_to_end_seconds > 0.0)) {
    throw std::invalid_argument("packet_rate: end-to-end time must be positive");
  }
  return static_cast<double>(packets) / end_to_end_seconds;
}

inline BenchResult make_result(double analysis_time, double end_to_end_time, count_t packets, BenchConfig config) {
  if (analysis_time < 0.0 || analysis_time > end_to_end_time) {
    throw std::invalid_argument("analysis time must lie within [0, end-to-end time]");
  }
  return BenchResult{analysis_time, end_to_end_time, packets, packet_rate(packets, end_to_end_time), config};
}

/// Best-of-N: each timing is the minimum over the runs, and the rate is
/// recomputed from the minimum end-to-end time.
inline BenchResult best_of(std::span<const BenchResult> runs) {
  if (runs.empty()) {
    throw std::invalid_argument("best_of: no runs");
  }
  double analysis = std::numeric_limits<double>::infinity();
  double total = std::numeric_limits<double>::infinity();
  for (const auto& r : runs) {
    analysis = std::min(analysis, r.analysis_time);
    total = std::min(total, r.end_to_end_time);
  }
  return make_result(analysis, total, runs.front().packet_count, runs.front().config);
}

inline nlohmann::json to_json(const BenchResult& r) {
  return {{"resources", r.config.resources},
          {"workers_per_resource", r.config.workers_per_resource},
          {"batches", r.config.batches},
          {"window_size", r.config.window_size},
          {"packets", r.config.packets},
          {"seed", r.config.seed},
          {"analysis_time", r.analysis_time},
          {"end_to_end_time", r.end_to_end_time},
          {"packet_count", r.packet_count},
          {"packet_rate", r.packet_rate}};
}

inline BenchResult bench_result_from_json(const nlohmann::json& j) {
  BenchResult r;
  r.config.resources = j.at("resources").get<std::size_t>();
  r.config.workers_per_resource = j.at("workers_per_resource").get<std::size_t>();
  r.config.batches = j.at("batches").get<std::size_t>();
  r.config.window_size = j.at("window_size").get<std::uint64_t>();
  r.config.packets = j.at("packets").get<std::uint64_t>();
  r.config.seed = j.at("seed").get<std::uint64_t>();
  r.analysis_time = j.at("analysis_time").get<double>();
  r.end_to_end_time = j.at("end_to_end_time").get<double>();
  r.packet_count = j.at("packet_count").get<count_t>();
  r.packet_rate = j.at("packet_rate").get<double>();
  return r;
}

struct AnalysisRun {
  DatasetReport report;
  BenchResult result;
};

/// Load the dataset directory, flatten, analyze. `start` marks the
/// beginning of the end-to-end interval; `finish` runs after analysis and
/// before the end-to-end clock stops (report emission).
template <class Finish>
AnalysisRun run_analysis(const std::filesystem::path& dir, const exec::Scheduler& sched, BenchConfig config,
                         clock::time_point start, Finish&& finish) {
  Dataset ds = load_dataset(dir);
  std::vector<FlatContainers> flat;
  flat.reserve(ds.matrices.size());
  for (const auto& m : ds.matrices) {
    flat.push_back(to_flat(m));
  }
  config.window_size = ds.manifest.window_size;
  config.packets = ds.manifest.packets;
  config.seed = ds.manifest.seed;

  const auto analysis_start = clock::now();
  DatasetReport report = analyze_dataset(std::span<const FlatContainers>(flat), sched, config.batches);
  const double analysis_time = seconds_since(analysis_start);

  finish(report);
  const double end_to_end = seconds_since(start);
  BenchResult result = make_result(analysis_time, end_to_end, report.totals.valid_packets, config);
  return {std::move(report), result};
}

}  // namespace netsense::bench

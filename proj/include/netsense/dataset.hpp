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

// A dataset directory holds one matrix file per window plus manifest.json:
//
//   {
//     "format": "netsense-dataset", "version": 1,
//     "packets": n, "valid_packets": v, "window_size": W,
//     "address_space": S, "seed": s, "key": k,
//     "windows": [ {"file": "window_000000.tm", "window": 0, "nnz": ..., "packets": ...}, ... ]
//   }

#include <netsense/matrix_io.hpp>
#include <netsense/traffic_matrix.hpp>

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

namespace netsense {

struct WindowEntry {
  std::string file;
  std::int64_t window = 0;
  std::uint64_t nnz = 0;
  count_t packets = 0;

  friend bool operator==(const WindowEntry&, const WindowEntry&) = default;
};

struct Manifest {
  std::uint64_t packets = 0;
  count_t valid_packets = 0;
  std::uint64_t window_size = 0;
  std::uint64_t address_space = 0;
  std::uint64_t seed = 0;
  std::uint64_t key = 0;
  std::vector<WindowEntry> windows;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

inline constexpr const char* manifest_name = "manifest.json";

inline nlohmann::json to_json(const Manifest& m) {
  nlohmann::json windows = nlohmann::json::array();
  for (const auto& w : m.windows) {
    windows.push_back({{"file", w.file}, {"window", w.window}, {"nnz", w.nnz}, {"packets", w.packets}});
  }
  return {{"format", "netsense-dataset"},
          {"version", 1},
          {"packets", m.packets},
          {"valid_packets", m.valid_packets},
          {"window_size", m.window_size},
          {"address_space", m.address_space},
          {"seed", m.seed},
          {"key", m.key},
          {"windows", std::move(windows)}};
}

inline Manifest manifest_from_json(const nlohmann::json& j, const std::string& source) {
  try {
    if (j.at("format").get<std::string>() != "netsense-dataset" || j.at("version").get<int>() != 1) {
      throw io_error(source + ": unsupported manifest format");
    }
    Manifest m;
    m.packets = j.at("packets").get<std::uint64_t>();
    m.valid_packets = j.at("valid_packets").get<count_t>();
    m.window_size = j.at("window_size").get<std::uint64_t>();
    m.address_space = j.at("address_space").get<std::uint64_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.key = j.at("key").get<std::uint64_t>();
    for (const auto& w : j.at("windows")) {
      m.windows.push_back(WindowEntry{w.at("file").get<std::string>(), w.at("window").get<std::int64_t>(),
                                      w.at("nnz").get<std::uint64_t>(), w.at("packets").get<count_t>()});
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw io_error(source + ": bad manifest: " + e.what());
  }
}

inline std::string window_file_name(std::int64_t window) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "window_%06lld.tm", static_cast<long long>(window));
  return buf;
}

inline count_t packet_total(const TrafficMatrix& m) {
  return std::accumulate(m.values.begin(), m.values.end(), count_t{0});
}

/// Writes every matrix and a manifest describing them. `meta.windows` is
/// filled in from the matrices; the other fields are recorded as given.
inline Manifest write_dataset(const std::filesystem::path& dir, std::span<const TrafficMatrix> matrices, Manifest meta) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw io_error("cannot create " + dir.string() + ": " + ec.message());
  }
  meta.windows.clear();
  for (const auto& m : matrices) {
    WindowEntry entry{window_file_name(m.window_id), m.window_id, m.nnz(), packet_total(m)};
    write_matrix(m, dir / entry.file);
    meta.windows.push_back(std::move(entry));
  }
  detail::dump(dir / manifest_name, to_json(meta).dump(2) + "\n");
  return meta;
}

struct Dataset {
  Manifest manifest;
  std::vector<TrafficMatrix> matrices;
};

/// Loads a dataset directory and cross-checks every file against its
/// manifest entry. Errors name the offending file.
inline Dataset load_dataset(const std::filesystem::path& dir) {
  const auto manifest_path = dir / manifest_name;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(detail::slurp(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw io_error(manifest_path.string() + ": " + e.what());
  }
  Dataset ds;
  ds.manifest = manifest_from_json(j, manifest_path.string());
  ds.matrices.reserve(ds.manifest.windows.size());
  for (const auto& w : ds.manifest.windows) {
    const auto path = dir / w.file;
    TrafficMatrix m = read_matrix(path);
    if (m.window_id != w.window || m.nnz() != w.nnz || packet_total(m) != w.packets) {
      throw io_error(path.string() + ": contents disagree with manifest entry");
    }
    ds.matrices.push_back(std::move(m));
  }
  return ds;
}

}  // namespace netsense

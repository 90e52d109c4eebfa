#pragma once

#include <netsense/traffic_matrix.hpp>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace netsense::testing {

// Packets spelling out a dense matrix, row-major, one packet per unit.
inline std::vector<PacketRecord> packets_for(const std::vector<std::vector<int>>& dense) {
  std::vector<PacketRecord> out;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    for (std::size_t j = 0; j < dense[i].size(); ++j) {
      for (int c = 0; c < dense[i][j]; ++c) {
        out.push_back(PacketRecord{static_cast<address_t>(i), static_cast<address_t>(j), true});
      }
    }
  }
  return out;
}

// [[2,1],[0,3]]
inline TrafficMatrix hand_fixture() {
  TrafficMatrix m;
  m.window_id = 0;
  m.dim = 2;
  m.row_ptr = {0, 2, 3};
  m.col_idx = {0, 1, 1};
  m.values = {2, 1, 3};
  return m;
}

// Random CSR matrix built directly (not through build_matrices).
inline TrafficMatrix random_matrix(std::mt19937_64& rng, std::uint64_t max_dim, std::int64_t window_id) {
  TrafficMatrix m;
  m.window_id = window_id;
  m.dim = 1 + rng() % max_dim;
  const double density = static_cast<double>(rng() % 1000) / 1000.0;
  m.row_ptr.assign(m.dim + 1, 0);
  for (std::uint64_t i = 0; i < m.dim; ++i) {
    for (std::uint64_t j = 0; j < m.dim; ++j) {
      if (static_cast<double>(rng() % 1000) / 1000.0 < density * density) {
        m.col_idx.push_back(static_cast<address_t>(j));
        m.values.push_back(1 + static_cast<count_t>(rng() % 1000));
      }
    }
    m.row_ptr[i + 1] = m.values.size();
  }
  return m;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("netsense-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace netsense::testing

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

// Text coordinate format for traffic matrices:
//
//   %%netsense-matrix 1
//   %window <t>
//   <dim> <nnz>
//   <row> <col> <value>      (nnz lines, strictly increasing row-major)
//
// Fields are separated by single spaces, lines end with '\n'. The writer
// emits exactly this layout, so equal matrices produce byte-identical files.
//
// Packet record files are a flat sequence of 9-byte records:
// src (u32 little-endian), dst (u32 little-endian), valid (u8, 0 or 1).

#include <netsense/traffic_matrix.hpp>

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace netsense {

inline constexpr std::string_view matrix_magic = "%%netsense-matrix 1";

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& source, std::size_t line, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), source_(source), line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class T>
void append_number(std::string& out, T value) {
  std::array<char, 24> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  out.append(buf.data(), end);
}

class line_reader {
 public:
  line_reader(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    const auto nl = text_.find('\n', pos_);
    const auto end = nl == std::string_view::npos ? text_.size() : nl;
    line = text_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++line_no_;
    return true;
  }

  std::size_t line_no() const noexcept { return line_no_; }

  [[noreturn]] void fail(const std::string& message) const { throw parse_error(source_, line_no_, message); }

  // Splits `line` into exactly N unsigned/signed integer fields.
  template <class... T>
  void fields(std::string_view line, T&... out) {
    const char* p = line.data();
    const char* end = line.data() + line.size();
    std::size_t index = 0;
    auto one = [&](auto& value) {
      if (index > 0) {
        if (p == end || *p != ' ') fail("expected " + std::to_string(sizeof...(T)) + " space-separated integers");
        ++p;
      }
      auto [next, ec] = std::from_chars(p, end, value);
      if (ec != std::errc{}) fail("invalid integer in field " + std::to_string(index + 1));
      p = next;
      ++index;
    };
    (one(out), ...);
    if (p != end) fail("unexpected trailing characters");
  }

 private:
  std::string_view text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw io_error("cannot open " + path.string());
  }
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void dump(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw io_error("cannot write " + path.string());
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw io_error("write failed for " + path.string());
  }
}

}  // namespace detail

inline std::string format_matrix(const TrafficMatrix& m) {
  validate(m);
  std::string out;
  out.reserve(64 + m.nnz() * 16);
  out.append(matrix_magic);
  out += "\n%window ";
  detail::append_number(out, m.window_id);
  out += '\n';
  detail::append_number(out, m.dim);
  out += ' ';
  detail::append_number(out, m.nnz());
  out += '\n';
  for (std::uint64_t i = 0; i < m.dim; ++i) {
    for (auto k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
      detail::append_number(out, i);
      out += ' ';
      detail::append_number(out, m.col_idx[k]);
      out += ' ';
      detail::append_number(out, m.values[k]);
      out += '\n';
    }
  }
  return out;
}

inline TrafficMatrix parse_matrix(std::string_view text, const std::string& source = "<memory>") {
  detail::line_reader reader(text, source);
  std::string_view line;

  if (!reader.next(line) || line != matrix_magic) {
    reader.fail("missing header '" + std::string(matrix_magic) + "'");
  }
  TrafficMatrix m;
  if (!reader.next(line) || !line.starts_with("%window ")) {
    reader.fail("expected '%window <id>'");
  }
  line.remove_prefix(8);
  reader.fields(line, m.window_id);

  std::uint64_t nnz = 0;
  if (!reader.next(line)) reader.fail("missing '<dim> <nnz>' line");
  reader.fields(line, m.dim, nnz);
  if (m.dim == 0) reader.fail("dimension must be positive");
  if (m.dim > (std::uint64_t{1} << 32)) reader.fail("dimension exceeds the 32-bit address space");

  m.row_ptr.assign(m.dim + 1, 0);
  m.col_idx.reserve(nnz);
  m.values.reserve(nnz);
  std::uint64_t prev_row = 0;
  std::uint64_t prev_col = 0;
  std::uint64_t entries = 0;
  while (reader.next(line)) {
    if (line.empty()) {
      // only a single terminating newline is tolerated
      if (reader.next(line)) reader.fail("blank line inside entry list");
      break;
    }
    if (entries == nnz) {
      reader.fail("header declares nnz=" + std::to_string(nnz) + " but more entries follow");
    }
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    count_t value = 0;
    reader.fields(line, row, col, value);
    if (row >= m.dim || col >= m.dim) reader.fail("index out of range for dim=" + std::to_string(m.dim));
    if (value < 1) reader.fail("packet count must be positive");
    if (entries > 0 && (row < prev_row || (row == prev_row && col <= prev_col))) {
      reader.fail("entries not in strictly increasing row-major order");
    }
    ++m.row_ptr[row + 1];
    m.col_idx.push_back(static_cast<address_t>(col));
    m.values.push_back(value);
    prev_row = row;
    prev_col = col;
    ++entries;
  }
  if (entries != nnz) {
    throw parse_error(source, reader.line_no(),
                      "header declares nnz=" + std::to_string(nnz) + " but file has " + std::to_string(entries) +
                          " entries");
  }
  for (std::uint64_t i = 0; i < m.dim; ++i) {
    m.row_ptr[i + 1] += m.row_ptr[i];
  }
  return m;
}

inline void write_matrix(const TrafficMatrix& m, const std::filesystem::path& path) {
  detail::dump(path, format_matrix(m));
}

inline TrafficMatrix read_matrix(const std::filesystem::path& path) {
  return parse_matrix(detail::slurp(path), path.string());
}

inline constexpr std::size_t packet_record_size = 9;

inline void write_packets(std::span<const PacketRecord> packets, const std::filesystem::path& path) {
  std::string bytes;
  bytes.reserve(packets.size() * packet_record_size);
  auto put32 = [&](std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) bytes.push_back(static_cast<char>((v >> shift) & 0xff));
  };
  for (const auto& p : packets) {
    put32(p.src);
    put32(p.dst);
    bytes.push_back(p.valid ? 1 : 0);
  }
  detail::dump(path, bytes);
}

inline std::vector<PacketRecord> read_packets(const std::filesystem::path& path) {
  const std::string bytes = detail::slurp(path);
  if (bytes.size() % packet_record_size != 0) {
    throw io_error(path.string() + ": size " + std::to_string(bytes.size()) + " is not a multiple of " +
                   std::to_string(packet_record_size));
  }
  auto get32 = [&](std::size_t at) {
    std::uint32_t v = 0;
    for (int b = 3; b >= 0; --b) v = (v << 8) | static_cast<unsigned char>(bytes[at + static_cast<std::size_t>(b)]);
    return v;
  };
  std::vector<PacketRecord> out;
  out.reserve(bytes.size() / packet_record_size);
  for (std::size_t at = 0; at < bytes.size(); at += packet_record_size) {
    const auto flag = static_cast<unsigned char>(bytes[at + 8]);
    if (flag > 1) {
      throw io_error(path.string() + ": record " + std::to_string(at / packet_record_size) + " has invalid flag byte");
    }
    out.push_back(PacketRecord{get32(at), get32(at + 4), flag == 1});
  }
  return out;
}

}  // namespace netsense

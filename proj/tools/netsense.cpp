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

// netsense generate | analyze | bench

#include <netsense/analytics.hpp>
#include <netsense/bench.hpp>
#include <netsense/dataset.hpp>
#include <netsense/exec/scheduler.hpp>
#include <netsense/matrix_io.hpp>
#include <netsense/traffic_matrix.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
namespace bench = netsense::bench;

namespace {

const bench::clock::time_point process_start = bench::clock::now();

struct GenerateOptions {
  std::uint64_t packets = 1 << 20;
  std::uint64_t address_space = 1 << 16;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> key;
  std::uint64_t window = 1 << 17;
  double invalid_fraction = 0.0;
  std::string out;
  std::string packets_file;
};

struct AnalyzeOptions {
  std::string in;
  std::size_t resources = 1;
  std::optional<std::size_t> workers;
  std::size_t batches = 1;
  std::string out;
  bool per_matrix = false;
};

struct BenchOptions {
  std::string in;
  std::vector<std::size_t> resources{1};
  std::optional<std::size_t> workers;
  std::vector<std::size_t> batches{1};
  std::size_t repeats = 5;
  std::string out;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out || !(out << text)) {
    throw netsense::io_error("cannot write " + path.string());
  }
}

int run_generate(const GenerateOptions& opt) {
  const auto raw = netsense::generate_packets(opt.packets, opt.address_space, opt.seed, opt.invalid_fraction);
  if (!opt.packets_file.empty()) {
    netsense::write_packets(raw, opt.packets_file);
  }
  const auto anon = netsense::anonymize(raw, opt.key.value_or(opt.seed));
  const auto matrices = netsense::build_matrices(anon.packets, opt.window);

  netsense::Manifest meta;
  meta.packets = opt.packets;
  meta.window_size = opt.window;
  meta.address_space = opt.address_space;
  meta.seed = opt.seed;
  meta.key = opt.key.value_or(opt.seed);
  for (const auto& p : anon.packets) {
    meta.valid_packets += p.valid ? 1 : 0;
  }
  const auto manifest = netsense::write_dataset(opt.out, matrices, meta);

  std::cout << "wrote " << manifest.windows.size() << " window(s) to " << opt.out << ": packets=" << manifest.packets
            << " valid_packets=" << manifest.valid_packets << " window=" << manifest.window_size
            << " addresses=" << anon.map.size() << "\n";
  return 0;
}

void print_result_row(std::ostream& os, const bench::BenchResult& r) {
  char line[256];
  std::snprintf(line, sizeof line, "%9zu %9zu %8zu %14.6f %14.6f %14lld %16.1f\n", r.config.resources,
                r.config.workers_per_resource, r.config.batches, r.analysis_time, r.end_to_end_time,
                static_cast<long long>(r.packet_count), r.packet_rate);
  os << line;
}

void print_result_header(std::ostream& os) {
  os << "resources   workers  batches  analysis_s     end_to_end_s   packets        packets_per_s\n";
}

int run_analyze(const AnalyzeOptions& opt) {
  const std::size_t workers = opt.workers.value_or(netsense::exec::default_workers_per_resource(opt.resources));
  const auto sched = netsense::exec::make_group_scheduler(opt.resources, workers);
  bench::BenchConfig config{opt.resources, workers, opt.batches, 0, 0, 0};

  nlohmann::json doc;
  auto emit = [&](const netsense::DatasetReport& report) {
    if (opt.per_matrix) {
      for (std::size_t t = 0; t < report.per_matrix.size(); ++t) {
        std::cout << "window " << t << ": " << netsense::to_text(report.per_matrix[t]) << "\n";
      }
    }
    std::cout << "totals: " << netsense::to_text(report.totals) << "\n";
    nlohmann::json per = nlohmann::json::array();
    for (const auto& r : report.per_matrix) per.push_back(netsense::to_json(r));
    doc["per_matrix"] = std::move(per);
    doc["totals"] = netsense::to_json(report.totals);
  };
  const auto run = bench::run_analysis(opt.in, sched, config, process_start, emit);

  print_result_header(std::cout);
  print_result_row(std::cout, run.result);
  if (!opt.out.empty()) {
    doc["bench"] = bench::to_json(run.result);
    write_text(opt.out, doc.dump(2) + "\n");
  }
  return 0;
}

int run_bench(const BenchOptions& opt) {
  std::ofstream results;
  if (!opt.out.empty()) {
    results.open(opt.out, std::ios::trunc);
    if (!results) throw netsense::io_error("cannot write " + opt.out);
  }
  print_result_header(std::cout);
  for (std::size_t resources : opt.resources) {
    const std::size_t workers = opt.workers.value_or(netsense::exec::default_workers_per_resource(resources));
    const auto sched = netsense::exec::make_group_scheduler(resources, workers);
    for (std::size_t batches : opt.batches) {
      std::vector<bench::BenchResult> runs;
      for (std::size_t rep = 0; rep < opt.repeats; ++rep) {
        const auto start = bench::clock::now();
        auto run = bench::run_analysis(opt.in, sched, bench::BenchConfig{resources, workers, batches, 0, 0, 0}, start,
                                       [](const netsense::DatasetReport&) {});
        runs.push_back(run.result);
      }
      const auto best = bench::best_of(runs);
      print_result_row(std::cout, best);
      if (results) {
        results << bench::to_json(best).dump() << "\n";
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Windowed traffic-matrix analytics on a senders-style execution model"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Generate, anonymize and window a synthetic packet stream");
  generate->add_option("--packets,-n", gen.packets, "Packet count")->capture_default_str();
  generate->add_option("--address-space", gen.address_space, "Raw addresses are drawn from [0, S)")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 32))
      ->capture_default_str();
  generate->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  generate->add_option("--key", gen.key, "Anonymization key (defaults to the seed)");
  generate->add_option("--window,-w", gen.window, "Packets per traffic matrix")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  generate->add_option("--invalid-fraction", gen.invalid_fraction, "Probability that a packet is marked invalid")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  generate->add_option("--out,-o", gen.out, "Output dataset directory")->required();
  generate->add_option("--packets-file", gen.packets_file, "Also write the raw packet records to this file");

  AnalyzeOptions ana;
  auto* analyze = app.add_subcommand("analyze", "Analyze a dataset directory once");
  analyze->add_option("in,--in", ana.in, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  analyze->add_option("--resources,-R", ana.resources, "Emulated devices")->check(CLI::PositiveNumber)->capture_default_str();
  analyze->add_option("--workers-per-resource,-k", ana.workers, "Threads per device (default: cores / resources)")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--batches,-b", ana.batches, "Batches per device partition")->check(CLI::PositiveNumber)->capture_default_str();
  analyze->add_option("--out,-o", ana.out, "Write reports and timing as JSON to this file");
  analyze->add_flag("--per-matrix", ana.per_matrix, "Print one report line per window");

  BenchOptions ben;
  auto* benchmark = app.add_subcommand("bench", "Sweep resources x batches, best of N runs per cell");
  benchmark->add_option("in,--in", ben.in, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  benchmark->add_option("--resources,-R", ben.resources, "Resource counts, comma separated")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  benchmark->add_option("--workers-per-resource,-k", ben.workers, "Threads per device (default: cores / resources)")
      ->check(CLI::PositiveNumber);
  benchmark->add_option("--batches,-b", ben.batches, "Batch counts, comma separated")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  benchmark->add_option("--repeats,-r", ben.repeats, "Runs per cell; the minimum is reported")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  benchmark->add_option("--out,-o", ben.out, "Write one JSON object per cell (JSON lines) to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return run_generate(gen);
    if (*analyze) return run_analyze(ana);
    if (*benchmark) return run_bench(ben);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include <netsense/analytics.hpp>
#include <netsense/bench.hpp>
#include <netsense/dataset.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace netsense;
using netsense::testing::hand_fixture;
using netsense::testing::TempDir;

namespace {

struct Outcome {
  int exit_code;
  std::string output;  // stdout and stderr
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(NETSENSE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

nlohmann::json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::size_t count_files(const std::filesystem::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

TEST(CliGenerate, SmallDatasetLayout) {
  TempDir dir("cli");
  const auto out = dir.path() / "ds";
  const auto r = run_cli("generate -n 10 --window 4 --address-space 8 --seed 3 --out " + out.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_EQ(count_files(out, ".tm"), 3u);
  const auto manifest = read_json(out / "manifest.json");
  EXPECT_EQ(manifest["windows"].size(), 3u);
  EXPECT_EQ(manifest["window_size"], 4);
  EXPECT_EQ(manifest["packets"], 10);
  EXPECT_EQ(manifest["seed"], 3);
  EXPECT_EQ(manifest["windows"][2]["packets"], 2);
}

TEST(CliGenerate, SameSeedByteIdentical) {
  TempDir dir("cli");
  const auto a = dir.path() / "a";
  const auto b = dir.path() / "b";
  ASSERT_EQ(run_cli("generate -n 5000 --window 1000 --seed 9 --out " + a.string()).exit_code, 0);
  ASSERT_EQ(run_cli("generate -n 5000 --window 1000 --seed 9 --out " + b.string()).exit_code, 0);
  for (const auto& e : std::filesystem::directory_iterator(a)) {
    const auto name = e.path().filename();
    EXPECT_EQ(netsense::detail::slurp(a / name), netsense::detail::slurp(b / name)) << name;
  }
  EXPECT_EQ(count_files(a, ".tm"), count_files(b, ".tm"));
}

TEST(CliGenerate, MillionPacketManifestMatchesRecount) {
  TempDir dir("cli");
  const auto out = dir.path() / "ds";
  ASSERT_EQ(run_cli("generate -n 1000000 --seed 5 --out " + out.string()).exit_code, 0);
  const auto ds = load_dataset(out);
  EXPECT_EQ(ds.manifest.packets, 1'000'000u);
  EXPECT_EQ(ds.manifest.window_size, 131072u);
  EXPECT_EQ(ds.matrices.size(), 8u);
  count_t recount = 0;
  for (const auto& m : ds.matrices) recount += packet_total(m);
  EXPECT_EQ(recount, 1'000'000);
  EXPECT_EQ(ds.manifest.valid_packets, recount);
}

TEST(CliGenerate, InvalidPacketsAndPacketFile) {
  TempDir dir("cli");
  const auto out = dir.path() / "ds";
  const auto pk = dir.path() / "raw.bin";
  ASSERT_EQ(run_cli("generate -n 2000 --invalid-fraction 0.5 --packets-file " + pk.string() + " --out " + out.string())
                .exit_code,
            0);
  const auto raw = read_packets(pk);
  ASSERT_EQ(raw.size(), 2000u);
  const auto valid = std::count_if(raw.begin(), raw.end(), [](const PacketRecord& p) { return p.valid; });
  const auto ds = load_dataset(out);
  EXPECT_EQ(ds.manifest.valid_packets, valid);
  EXPECT_LT(valid, 2000);
}

TEST(CliGenerate, RejectsBadParameters) {
  TempDir dir("cli");
  EXPECT_NE(run_cli("generate -n 10 --window 0 --out " + (dir.path() / "x").string()).exit_code, 0);
  EXPECT_NE(run_cli("generate -n 10 --address-space 0 --out " + (dir.path() / "x").string()).exit_code, 0);
  EXPECT_NE(run_cli("generate -n 10").exit_code, 0);
}

TEST(CliAnalyze, HandFixtureReport) {
  TempDir dir("cli");
  const std::vector<TrafficMatrix> ms{hand_fixture()};
  Manifest meta;
  meta.packets = 6;
  meta.valid_packets = 6;
  write_dataset(dir.path() / "ds", ms, meta);
  const auto res = dir.path() / "report.json";
  const auto r = run_cli("analyze " + (dir.path() / "ds").string() + " --out " + res.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("valid_packets=6 unique_links=3 unique_sources=2 max_fanout=2 unique_destinations=2 max_fanin=2"),
            std::string::npos)
      << r.output;
  const auto doc = read_json(res);
  EXPECT_EQ(report_from_json(doc["totals"]), (AggregateReport{6, 3, 2, 2, 2, 2}));
  EXPECT_EQ(doc["per_matrix"].size(), 1u);
  const auto b = bench::bench_result_from_json(doc["bench"]);
  EXPECT_EQ(b.packet_count, 6);
  EXPECT_LE(b.analysis_time, b.end_to_end_time);
  EXPECT_DOUBLE_EQ(b.packet_rate, 6 / b.end_to_end_time);
}

TEST(CliAnalyze, ReportsInvariantAcrossConfigurations) {
  TempDir dir("cli");
  const auto ds = dir.path() / "ds";
  ASSERT_EQ(run_cli("generate -n 200000 --window 30000 --seed 2 --out " + ds.string()).exit_code, 0);
  const auto a = dir.path() / "a.json";
  const auto b = dir.path() / "b.json";
  ASSERT_EQ(run_cli("analyze " + ds.string() + " -R 1 -b 1 --out " + a.string()).exit_code, 0);
  ASSERT_EQ(run_cli("analyze " + ds.string() + " -R 4 -k 2 -b 10 --per-matrix --out " + b.string()).exit_code, 0);
  const auto ja = read_json(a);
  const auto jb = read_json(b);
  EXPECT_EQ(ja["totals"], jb["totals"]);
  EXPECT_EQ(ja["per_matrix"], jb["per_matrix"]);
  EXPECT_EQ(jb["bench"]["resources"], 4);
  EXPECT_EQ(jb["bench"]["batches"], 10);
  EXPECT_EQ(ja["totals"]["valid_packets"], 200000);
}

TEST(CliAnalyze, MissingDirectoryFails) {
  const auto r = run_cli("analyze /nonexistent/netsense-ds");
  EXPECT_NE(r.exit_code, 0);
}

TEST(CliAnalyze, CorruptFileNamed) {
  TempDir dir("cli");
  const auto ds = dir.path() / "ds";
  ASSERT_EQ(run_cli("generate -n 100 --window 40 --out " + ds.string()).exit_code, 0);
  netsense::detail::dump(ds / "window_000001.tm", "%%netsense-matrix 1\n%window 1\n");
  const auto r = run_cli("analyze " + ds.string());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("window_000001.tm"), std::string::npos) << r.output;
}

TEST(CliBench, TableShapeAndMinimumSemantics) {
  TempDir dir("cli");
  const auto ds = dir.path() / "ds";
  ASSERT_EQ(run_cli("generate -n 50000 --window 10000 --out " + ds.string()).exit_code, 0);
  const auto res = dir.path() / "bench.jsonl";
  const auto r = run_cli("bench " + ds.string() + " -R 1,2,4 -b 1,5 -k 1 -r 3 --out " + res.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  std::ifstream in(res);
  std::string line;
  std::vector<bench::BenchResult> rows;
  while (std::getline(in, line)) rows.push_back(bench::bench_result_from_json(nlohmann::json::parse(line)));
  ASSERT_EQ(rows.size(), 6u);
  std::size_t i = 0;
  for (std::size_t resources : {1u, 2u, 4u}) {
    for (std::size_t batches : {1u, 5u}) {
      EXPECT_EQ(rows[i].config.resources, resources);
      EXPECT_EQ(rows[i].config.batches, batches);
      EXPECT_EQ(rows[i].config.workers_per_resource, 1u);
      EXPECT_EQ(rows[i].packet_count, 50000);
      EXPECT_LE(rows[i].analysis_time, rows[i].end_to_end_time);
      EXPECT_DOUBLE_EQ(rows[i].packet_rate, 50000 / rows[i].end_to_end_time);
      ++i;
    }
  }
}

TEST(CliBench, SingleCellMatchesAnalyzeShape) {
  TempDir dir("cli");
  const auto ds = dir.path() / "ds";
  ASSERT_EQ(run_cli("generate -n 5000 --window 1000 --out " + ds.string()).exit_code, 0);
  const auto res = dir.path() / "bench.jsonl";
  const auto an = dir.path() / "an.json";
  ASSERT_EQ(run_cli("bench " + ds.string() + " -r 1 --out " + res.string()).exit_code, 0);
  ASSERT_EQ(run_cli("analyze " + ds.string() + " --out " + an.string()).exit_code, 0);
  std::ifstream in(res);
  std::string line;
  std::getline(in, line);
  const auto cell = nlohmann::json::parse(line);
  const auto single = read_json(an)["bench"];
  for (const auto& [key, value] : single.items()) EXPECT_TRUE(cell.contains(key)) << key;
  EXPECT_EQ(cell.size(), single.size());
}

TEST(CliBench, RejectsZeroRepeats) {
  TempDir dir("cli");
  const auto ds = dir.path() / "ds";
  ASSERT_EQ(run_cli("generate -n 100 --out " + ds.string()).exit_code, 0);
  EXPECT_NE(run_cli("bench " + ds.string() + " -r 0").exit_code, 0);
}

}  // namespace

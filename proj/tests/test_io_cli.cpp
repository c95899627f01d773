#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "json.hpp"
#include "smp/cli.hpp"
#include "smp/io.hpp"
#include "smp/parallel.hpp"

using namespace smp;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "smp");
  std::ostringstream out, err;
  CliRun r;
  r.code = cli_main(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("smp-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t columns(const std::string& line, char sep) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), sep)) + 1;
}

RunManifest manifest() {
  RunManifest m;
  m.master_seed = 42;
  m.config_echo = {{"n", 100}, {"delta", 0}, {"q", 0.5}, {"rounds", 3}, {"event", "consensus"}, {"command", "estimate"}};
  m.command_line = {"estimate", "--n", "100"};
  return m;
}

SweepResult sample_sweep() {
  SweepResult s;
  s.kind = "theorem2";
  s.summary["envelope_exponent"] = 1.0 / 128.0;
  s.notes.push_back("a note");
  SweepRow a;
  a.series = "smp2_symmetric";
  a.n = 100;
  a.q = 0.5;
  a.rounds = 2;
  a.event = "consensus";
  a.estimate = make_estimate(37, 1000);
  a.exact = 0.0371;
  a.bound = theorem2_envelope_report(100, 0.5);
  a.bound->attach(0.037);
  SweepRow b = a;
  b.n = 1000;
  b.estimate = make_estimate(5, 1000, IntervalMethod::clopper_pearson);
  b.exact.reset();
  b.bound.reset();
  b.predicted_limit = 0.5;
  s.rows = {a, b};
  return s;
}

}  // namespace

TEST(Json, RoundTripsEveryPayload) {
  TrialOutcome t;
  t.trajectory = {{3, 5}, {2, 6}, {0, 8}};
  t.consensus = true;
  t.final_value = Opinion::one;
  VerificationReport v;
  v.suite = "acceptance";
  v.criteria = {{1, "first", true, "fine"}, {2, "second", false, "off by 0.1"}};
  v.sweeps = {sample_sweep()};
  BoundReport bracket = stirling_report(10, 0.3, 4);
  const std::vector<Payload> payloads = {sample_sweep(), make_estimate(3, 10), prop1_report(100, 50, 0.5), bracket,
                                         CountDistribution{2, {0.25, 0.5, 0.25}}, t, v};
  for (const Payload& p : payloads) {
    ResultFile f{manifest(), p};
    f.manifest.started = "2024-01-01T00:00:00Z";
    const ResultFile back = result_file_from_json(nlohmann::json::parse(render_json(f)));
    EXPECT_EQ(back, f) << payload_type(p);
  }
}

TEST(Json, ManifestFirstAndNullTimestamps) {
  const std::string text = render_json({manifest(), make_estimate(1, 2)});
  EXPECT_EQ(text.rfind("{\n  \"manifest\"", 0), 0u);
  const auto j = nlohmann::json::parse(text);
  EXPECT_TRUE(j.at("manifest").at("started").is_null());
  EXPECT_EQ(j.at("manifest").at("tool_version"), kToolVersion);
  EXPECT_EQ(text.back(), '\n');
}

TEST(Json, RejectsUnknownPayload) {
  auto j = to_json({manifest(), make_estimate(1, 2)});
  j["payload_type"] = "mystery";
  EXPECT_THROW(result_file_from_json(j), std::invalid_argument);
}

TEST(Csv, SweepHasFixedHeader) {
  const auto rows = lines(render_csv({manifest(), sample_sweep()}));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "n,delta,q,rounds,event,p_hat,ci_low,ci_high,trials,bound_name,bound_value");
  for (const std::string& r : rows) EXPECT_EQ(columns(r, ','), 11u) << r;
  EXPECT_NE(rows[1].find("theorem2_envelope"), std::string::npos);
}

TEST(Csv, EstimateIsOneRow) {
  const auto rows = lines(render_csv({manifest(), make_estimate(50, 100)}));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(columns(rows[1], ','), 11u);
  EXPECT_EQ(rows[1].rfind("100,0,0.5,3,consensus,0.5,", 0), 0u) << rows[1];
}

TEST(Csv, RealsKeepSeventeenDigits) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(0.0), "0");
}

TEST(Plot, OneBlockPerSeries) {
  const SweepResult tri = trichotomy_sweep(
      {AsymmetryRegime::zero(), AsymmetryRegime::sqrt_scaled(1.0), AsymmetryRegime::power(0.75)}, {100, 1000}, 0.5);
  const std::string text = render_plot_data(tri);
  std::size_t blocks = 0;
  for (std::size_t pos = 0; (pos = text.find("\n\n\n", pos)) != std::string::npos; ++pos) ++blocks;
  EXPECT_EQ(blocks + 1, 3u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '#'), 3);

  for (const std::string& line : lines(render_plot_data(sample_sweep()))) {
    if (line.empty() || line[0] == '#') continue;
    EXPECT_EQ(columns(line, ' '), 3u) << line;
  }
  EXPECT_EQ(render_plot_data(SweepResult{}), "");
}

TEST(Files, WriteAndRead) {
  TempDir dir;
  const ResultFile f{manifest(), sample_sweep()};
  write_results(f, OutputFormat::json, dir / "r.json");
  EXPECT_EQ(read_results_json(dir / "r.json"), f);
  write_results(f, OutputFormat::csv, dir / "r.csv");
  EXPECT_EQ(read_text(dir / "r.csv"), render_csv(f));
}

TEST(Files, ErrorsNameThePath) {
  try {
    read_text("/nonexistent/dir/file.json");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/file.json"), std::string::npos);
  }
  EXPECT_THROW(write_text("/nonexistent/dir/out.json", "x"), IoError);
}

TEST(Cli, BoundSummary) {
  const CliRun r = run({"bounds", "prop1", "--n", "100", "--a", "50", "--q", "0.5"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("1.291e-03"), std::string::npos) << r.out;
}

TEST(Cli, ExactChainTwoAgents) {
  const CliRun r = run({"oracle", "exact-chain", "--n", "1", "--delta", "0", "--q", "0.5", "--rounds", "3"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("consensus probability 0\n"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"bounds", "prop1", "--n", "abc"}).code, kExitUsage);
  EXPECT_EQ(run({"bounds", "prop1", "--n", "10", "--a", "10"}).code, kExitUsage);  // A must be below n
  EXPECT_EQ(run({"oracle", "exhaustive", "--zeros", "4", "--ones", "4"}).code, kExitUsage);
  EXPECT_EQ(run({"estimate", "--seed", "12x"}).code, kExitUsage);
  EXPECT_EQ(run({"estimate", "--n", "5", "--trials", "10", "--out", "/nonexistent/dir/x.json"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, MalformedConfig) {
  TempDir dir;
  write_text(dir / "bad.json", "{ not json");
  const CliRun r = run({"bounds", "prop4", "--config", (dir / "bad.json").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("bad.json"), std::string::npos);
  write_text(dir / "typed.json", R"({"n": "many"})");
  EXPECT_EQ(run({"bounds", "prop4", "--config", (dir / "typed.json").string()}).code, kExitUsage);
  EXPECT_EQ(run({"bounds", "prop4", "--config", (dir / "missing.json").string()}).code, kExitUsage);
}

TEST(Cli, FlagsBeatConfigBeatsDefaults) {
  TempDir dir;
  write_text(dir / "c.json", R"({"n": 400, "b": 40, "seed": 7})");
  const CliRun r = run({"bounds", "prop4", "--config", (dir / "c.json").string(), "--b", "20", "--out", "-"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["manifest"]["config_echo"]["n"], 400);
  EXPECT_EQ(j["manifest"]["config_echo"]["b"], 20);
  EXPECT_EQ(j["manifest"]["master_seed"], 7u);
  EXPECT_EQ(j["payload"]["parameters"]["n"], 400);

  const CliRun d = run({"bounds", "prop4", "--out", "-"});
  const auto k = nlohmann::json::parse(d.out);
  EXPECT_EQ(k["manifest"]["config_echo"]["n"], 100);
  EXPECT_EQ(k["manifest"]["master_seed"], kDefaultSeed);
}

TEST(Cli, CsvToStdout) {
  const CliRun r = run({"estimate", "--n", "10", "--trials", "50", "--format", "csv", "--out", "-"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(columns(rows[1], ','), 11u);
}

TEST(Cli, RandomSeedIsRecorded) {
  const CliRun a = run({"estimate", "--n", "10", "--trials", "20", "--seed", "random", "--out", "-"});
  const CliRun b = run({"estimate", "--n", "10", "--trials", "20", "--seed", "random", "--out", "-"});
  ASSERT_EQ(a.code, kExitOk);
  const auto sa = nlohmann::json::parse(a.out)["manifest"]["master_seed"].get<std::uint64_t>();
  const auto sb = nlohmann::json::parse(b.out)["manifest"]["master_seed"].get<std::uint64_t>();
  EXPECT_NE(sa, sb);
  // Re-running with the recorded seed reproduces the payload.
  const CliRun c = run({"estimate", "--n", "10", "--trials", "20", "--seed", std::to_string(sa), "--out", "-"});
  EXPECT_EQ(nlohmann::json::parse(a.out)["payload"], nlohmann::json::parse(c.out)["payload"]);
}

TEST(Cli, HexSeed) {
  const CliRun r = run({"bounds", "prop4", "--seed", "0x10", "--out", "-"});
  EXPECT_EQ(nlohmann::json::parse(r.out)["manifest"]["master_seed"], 16u);
}

TEST(Cli, VerifyIsByteIdenticalAcrossRunsAndWorkers) {
  TempDir dir;
  const std::vector<std::string> base = {"verify", "theorem1", "--n-grid", "50,100", "--trials", "300", "--seed", "5"};
  std::vector<std::string> bytes;
  for (const char* workers : {"1", "1", "3"}) {
    auto args = base;
    const std::string path = (dir / (std::string("v") + std::to_string(bytes.size()) + ".json")).string();
    args.insert(args.end(), {"--workers", workers, "--out", path});
    run(args);
    bytes.push_back(read_text(path));
  }
  EXPECT_FALSE(bytes[0].empty());
  EXPECT_EQ(bytes[0], bytes[1]);
  EXPECT_EQ(bytes[0], bytes[2]);
}

TEST(Cli, FailingVerifyExitsTwo) {
  // Three rounds from a tie of four agents rarely end in consensus.
  TempDir dir;
  const std::string path = (dir / "v.json").string();
  const CliRun r = run({"verify", "theorem1", "--n-grid", "2", "--trials", "200", "--out", path});
  EXPECT_EQ(r.code, kExitVerifyFailed) << r.out;
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
  const ResultFile f = read_results_json(path);
  EXPECT_FALSE(std::get<VerificationReport>(f.payload).passed());
}

TEST(Cli, WorkersFromEnvironment) {
  ::setenv(kWorkersEnv, "0", 1);
  EXPECT_EQ(run({"bounds", "prop4"}).code, kExitUsage);
  ::setenv(kWorkersEnv, "2", 1);
  EXPECT_EQ(run({"bounds", "prop4"}).code, kExitOk);
  EXPECT_EQ(run({"bounds", "prop4", "--workers", "1"}).code, kExitOk);  // flag wins over a bad env value too
  ::setenv(kWorkersEnv, "junk", 1);
  EXPECT_EQ(run({"bounds", "prop4", "--workers", "1"}).code, kExitOk);
  EXPECT_EQ(run({"bounds", "prop4"}).code, kExitUsage);
  ::unsetenv(kWorkersEnv);
}

TEST(Cli, PlotNeedsASweep) {
  TempDir dir;
  EXPECT_EQ(run({"bounds", "prop4", "--plot", (dir / "p.dat").string()}).code, kExitUsage);
  const CliRun r = run({"sweep", "trichotomy", "--n-grid", "100,1000", "--plot", (dir / "p.dat").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string plot = read_text(dir / "p.dat");
  EXPECT_EQ(std::count(plot.begin(), plot.end(), '#'), 3);
}

TEST(Cli, ManifestDropsRunOnlyFlags) {
  const CliRun r = run({"bounds", "prop4", "--workers", "1", "--timestamps", "--out", "-"});
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["manifest"]["command_line"], nlohmann::json({"bounds", "prop4"}));
  EXPECT_TRUE(j["manifest"]["started"].is_string());
}

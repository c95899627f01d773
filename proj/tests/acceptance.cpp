// Runs the acceptance criteria and prints one PASS/FAIL line each.
//   acceptance [--only 1,2,...] [--seed S]
// Exit status is 0 only if every selected criterion passed.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "smp/cli.hpp"
#include "smp/io.hpp"
#include "smp/verification.hpp"

namespace {

std::string verify_bytes(std::uint64_t seed, int workers) {
  const auto path = std::filesystem::temp_directory_path() /
                    ("smp-acceptance-" + std::to_string(::getpid()) + "-" + std::to_string(workers) + ".json");
  std::ostringstream sink;
  smp::cli_main({"smp", "verify", "theorem1", "--q", "0.5", "--seed", std::to_string(seed), "--workers",
                 std::to_string(workers), "--out", path.string()},
                sink, sink);
  std::string bytes;
  if (std::filesystem::exists(path)) bytes = smp::read_text(path);
  std::filesystem::remove(path);
  return bytes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  std::uint64_t seed = 42;
  app.add_option("--only", only, "criterion ids")->delimiter(',');
  app.add_option("--seed", seed, "master seed");
  CLI11_PARSE(app, argc, argv);
  if (only.empty()) {
    for (int i = 1; i <= smp::kCriterionCount; ++i) only.push_back(i);
  }

  int failed = 0;
  for (int id : only) {
    const auto t0 = std::chrono::steady_clock::now();
    const smp::CriterionResult r =
        smp::run_criterion(id, seed, [seed](int workers) { return verify_bytes(seed, workers); });
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %2d (%6.1fs) %s: %s\n", r.passed ? "PASS" : "FAIL", r.id, seconds, r.title.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%zu criteria, %d failed\n", only.size(), failed);
  return failed == 0 ? 0 : 1;
}

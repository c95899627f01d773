#pragma once

// Result files: a run manifest plus one payload, written as JSON or CSV,
// and gnuplot-ready series.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "smp/bounds.hpp"
#include "smp/experiments.hpp"
#include "smp/oracle.hpp"
#include "smp/simulation.hpp"
#include "smp/verification.hpp"

namespace smp {

inline constexpr const char* kToolVersion = "0.1.0";

/// Read or write failure; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunManifest {
  std::string tool_version = kToolVersion;
  std::uint64_t master_seed = 0;
  nlohmann::json config_echo = nlohmann::json::object();
  std::optional<std::string> started;  // only with --timestamps
  std::optional<std::string> finished;
  std::vector<std::string> command_line;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

using Payload = std::variant<SweepResult, Estimate, BoundReport, CountDistribution, TrialOutcome, VerificationReport>;

struct ResultFile {
  RunManifest manifest;
  Payload payload;

  friend bool operator==(const ResultFile&, const ResultFile&) = default;
};

enum class OutputFormat { json, csv };

OutputFormat output_format_from_string(const std::string& s);

std::string payload_type(const Payload& payload);

nlohmann::json to_json(const ResultFile& file);
ResultFile result_file_from_json(const nlohmann::json& j);

/// One JSON document, manifest first, two-space indent, trailing newline.
std::string render_json(const ResultFile& file);

/// Sweep-shaped payloads use the header
/// n,delta,q,rounds,event,p_hat,ci_low,ci_high,trials,bound_name,bound_value
/// with reals at 17 significant digits. Distributions, trajectories and
/// verification reports have their own small tables.
std::string render_csv(const ResultFile& file);

std::string render(const ResultFile& file, OutputFormat format);

void write_results(const ResultFile& file, OutputFormat format, const std::filesystem::path& path);
ResultFile read_results_json(const std::filesystem::path& path);

/// Whitespace-separated "n y yerr" blocks, one per series, separated by two
/// blank lines so gnuplot can address them with `index`.
std::string render_plot_data(const SweepResult& sweep);
void emit_plot_data(const SweepResult& sweep, const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// %.17g
std::string format_real(double x);

}  // namespace smp

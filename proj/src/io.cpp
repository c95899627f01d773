#include "smp/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace smp {

using nlohmann::json;

namespace {

json real(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double real_of(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

void put_optional(json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = real(*v);
}

std::optional<double> optional_real(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return real_of(j.at(key));
}

json estimate_json(const Estimate& e) {
  return {{"successes", e.successes}, {"trials", e.trials}, {"p_hat", real(e.p_hat)},
          {"ci_low", real(e.ci_low)},  {"ci_high", real(e.ci_high)}};
}

Estimate estimate_from(const json& j) {
  Estimate e;
  e.successes = j.at("successes").get<Count>();
  e.trials = j.at("trials").get<Count>();
  e.p_hat = real_of(j.at("p_hat"));
  e.ci_low = real_of(j.at("ci_low"));
  e.ci_high = real_of(j.at("ci_high"));
  return e;
}

json bound_json(const BoundReport& b) {
  json params = {{"n", b.parameters.n}, {"asymmetry", b.parameters.asymmetry}};
  put_optional(params, "q", b.parameters.q);
  json j = {{"bound_name", to_string(b.bound_name)}, {"parameters", params}, {"bound_value", real(b.bound_value)}};
  put_optional(j, "lower_value", b.lower_value);
  put_optional(j, "empirical_value", b.empirical_value);
  put_optional(j, "satisfied", b.satisfied);
  return j;
}

BoundReport bound_from(const json& j) {
  BoundReport b;
  b.bound_name = bound_name_from_string(j.at("bound_name").get<std::string>());
  const json& p = j.at("parameters");
  b.parameters.n = p.at("n").get<Count>();
  b.parameters.asymmetry = p.at("asymmetry").get<Count>();
  b.parameters.q = optional_real(p, "q");
  b.bound_value = real_of(j.at("bound_value"));
  b.lower_value = optional_real(j, "lower_value");
  b.empirical_value = optional_real(j, "empirical_value");
  if (j.contains("satisfied")) b.satisfied = j.at("satisfied").get<bool>();
  return b;
}

json row_json(const SweepRow& r) {
  json j = {{"series", r.series}, {"n", r.n},           {"delta", r.delta},
            {"q", real(r.q)},     {"rounds", r.rounds}, {"event", r.event}};
  if (r.estimate) j["estimate"] = estimate_json(*r.estimate);
  put_optional(j, "exact", r.exact);
  if (r.bound) j["bound"] = bound_json(*r.bound);
  put_optional(j, "predicted_limit", r.predicted_limit);
  return j;
}

SweepRow row_from(const json& j) {
  SweepRow r;
  r.series = j.at("series").get<std::string>();
  r.n = j.at("n").get<Count>();
  r.delta = j.at("delta").get<Count>();
  r.q = real_of(j.at("q"));
  r.rounds = j.at("rounds").get<int>();
  r.event = j.at("event").get<std::string>();
  if (j.contains("estimate")) r.estimate = estimate_from(j.at("estimate"));
  r.exact = optional_real(j, "exact");
  if (j.contains("bound")) r.bound = bound_from(j.at("bound"));
  r.predicted_limit = optional_real(j, "predicted_limit");
  return r;
}

json sweep_json(const SweepResult& s) {
  json rows = json::array();
  for (const SweepRow& r : s.rows) rows.push_back(row_json(r));
  json summary = json::object();
  for (const auto& [k, v] : s.summary) summary[k] = real(v);
  return {{"kind", s.kind}, {"summary", summary}, {"notes", s.notes}, {"rows", rows}};
}

SweepResult sweep_from(const json& j) {
  SweepResult s;
  s.kind = j.at("kind").get<std::string>();
  for (const auto& [k, v] : j.at("summary").items()) s.summary[k] = real_of(v);
  s.notes = j.at("notes").get<std::vector<std::string>>();
  for (const json& r : j.at("rows")) s.rows.push_back(row_from(r));
  return s;
}

json distribution_json(const CountDistribution& d) {
  json probs = json::array();
  for (double p : d.probabilities) probs.push_back(real(p));
  return {{"total", d.total}, {"probabilities", probs}};
}

CountDistribution distribution_from(const json& j) {
  CountDistribution d;
  d.total = j.at("total").get<Count>();
  for (const json& p : j.at("probabilities")) d.probabilities.push_back(real_of(p));
  return d;
}

json trial_json(const TrialOutcome& t) {
  json traj = json::array();
  for (const OpinionCounts& c : t.trajectory) traj.push_back({c.zeros, c.ones});
  json j = {{"trajectory", traj}, {"consensus", t.consensus}, {"majority_consensus", t.majority_consensus}};
  j["final_value"] = t.final_value ? json(static_cast<int>(*t.final_value)) : json(nullptr);
  return j;
}

TrialOutcome trial_from(const json& j) {
  TrialOutcome t;
  for (const json& c : j.at("trajectory")) t.trajectory.push_back({c.at(0).get<Count>(), c.at(1).get<Count>()});
  t.consensus = j.at("consensus").get<bool>();
  t.majority_consensus = j.at("majority_consensus").get<bool>();
  if (!j.at("final_value").is_null()) t.final_value = static_cast<Opinion>(j.at("final_value").get<int>());
  return t;
}

json report_json(const VerificationReport& r) {
  json criteria = json::array();
  for (const CriterionResult& c : r.criteria) {
    criteria.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"detail", c.detail}});
  }
  json sweeps = json::array();
  for (const SweepResult& s : r.sweeps) sweeps.push_back(sweep_json(s));
  return {{"suite", r.suite}, {"passed", r.passed()}, {"criteria", criteria}, {"sweeps", sweeps}};
}

VerificationReport report_from(const json& j) {
  VerificationReport r;
  r.suite = j.at("suite").get<std::string>();
  for (const json& c : j.at("criteria")) {
    r.criteria.push_back({c.at("id").get<int>(), c.at("title").get<std::string>(), c.at("passed").get<bool>(),
                          c.at("detail").get<std::string>()});
  }
  for (const json& s : j.at("sweeps")) r.sweeps.push_back(sweep_from(s));
  return r;
}

json manifest_json(const RunManifest& m) {
  json j = {{"tool_version", m.tool_version},
            {"master_seed", m.master_seed},
            {"config_echo", m.config_echo},
            {"command_line", m.command_line}};
  j["started"] = m.started ? json(*m.started) : json(nullptr);
  j["finished"] = m.finished ? json(*m.finished) : json(nullptr);
  return j;
}

RunManifest manifest_from(const json& j) {
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.config_echo = j.at("config_echo");
  m.command_line = j.at("command_line").get<std::vector<std::string>>();
  if (!j.at("started").is_null()) m.started = j.at("started").get<std::string>();
  if (!j.at("finished").is_null()) m.finished = j.at("finished").get<std::string>();
  return m;
}

const char* const kSweepHeader = "n,delta,q,rounds,event,p_hat,ci_low,ci_high,trials,bound_name,bound_value\n";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string echo_field(const json& echo, const char* key) {
  if (!echo.contains(key)) return "";
  const json& v = echo.at(key);
  if (v.is_string()) return csv_field(v.get<std::string>());
  if (v.is_number_float()) return format_real(v.get<double>());
  return v.dump();
}

void sweep_csv_row(std::ostringstream& out, const SweepRow& r) {
  out << r.n << ',' << r.delta << ',' << format_real(r.q) << ',' << r.rounds << ',' << csv_field(r.event) << ',';
  if (r.estimate) {
    out << format_real(r.estimate->p_hat) << ',' << format_real(r.estimate->ci_low) << ','
        << format_real(r.estimate->ci_high) << ',' << r.estimate->trials << ',';
  } else {
    out << (r.exact ? format_real(*r.exact) : "") << ",,,,";
  }
  if (r.bound) out << to_string(r.bound->bound_name) << ',' << format_real(r.bound->bound_value);
  else out << ',';
  out << '\n';
}

struct CsvVisitor {
  const RunManifest& manifest;
  std::ostringstream& out;

  void operator()(const SweepResult& s) const {
    out << kSweepHeader;
    for (const SweepRow& r : s.rows) sweep_csv_row(out, r);
  }
  void operator()(const Estimate& e) const {
    const json& c = manifest.config_echo;
    out << kSweepHeader;
    out << echo_field(c, "n") << ',' << echo_field(c, "delta") << ',' << echo_field(c, "q") << ','
        << echo_field(c, "rounds") << ',' << echo_field(c, "event") << ',' << format_real(e.p_hat) << ','
        << format_real(e.ci_low) << ',' << format_real(e.ci_high) << ',' << e.trials << ",,\n";
  }
  void operator()(const BoundReport& b) const {
    out << kSweepHeader;
    out << b.parameters.n << ',' << b.parameters.asymmetry << ','
        << (b.parameters.q ? format_real(*b.parameters.q) : "") << ",,bound,"
        << (b.empirical_value ? format_real(*b.empirical_value) : "") << ",,,," << to_string(b.bound_name) << ','
        << format_real(b.bound_value) << '\n';
  }
  void operator()(const CountDistribution& d) const {
    out << "zeros,probability\n";
    for (Count z = 0; z <= d.total; ++z) out << z << ',' << format_real(d.at(z)) << '\n';
  }
  void operator()(const TrialOutcome& t) const {
    out << "round,zeros,ones\n";
    for (std::size_t r = 0; r < t.trajectory.size(); ++r) {
      out << r << ',' << t.trajectory[r].zeros << ',' << t.trajectory[r].ones << '\n';
    }
  }
  void operator()(const VerificationReport& v) const {
    out << "id,title,passed,detail\n";
    for (const CriterionResult& c : v.criteria) {
      out << c.id << ',' << csv_field(c.title) << ',' << (c.passed ? "true" : "false") << ',' << csv_field(c.detail)
          << '\n';
    }
  }
};

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  throw std::invalid_argument("unknown output format '" + s + "'");
}

std::string payload_type(const Payload& payload) {
  static const char* const names[] = {"sweep", "estimate", "bound", "distribution", "trial", "verification"};
  return names[payload.index()];
}

json to_json(const ResultFile& file) {
  json payload = std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SweepResult>) return sweep_json(p);
        else if constexpr (std::is_same_v<T, Estimate>) return estimate_json(p);
        else if constexpr (std::is_same_v<T, BoundReport>) return bound_json(p);
        else if constexpr (std::is_same_v<T, CountDistribution>) return distribution_json(p);
        else if constexpr (std::is_same_v<T, TrialOutcome>) return trial_json(p);
        else return report_json(p);
      },
      file.payload);
  return {{"manifest", manifest_json(file.manifest)}, {"payload_type", payload_type(file.payload)}, {"payload", payload}};
}

ResultFile result_file_from_json(const json& j) {
  ResultFile f{manifest_from(j.at("manifest")), Estimate{}};
  const std::string type = j.at("payload_type").get<std::string>();
  const json& p = j.at("payload");
  if (type == "sweep") f.payload = sweep_from(p);
  else if (type == "estimate") f.payload = estimate_from(p);
  else if (type == "bound") f.payload = bound_from(p);
  else if (type == "distribution") f.payload = distribution_from(p);
  else if (type == "trial") f.payload = trial_from(p);
  else if (type == "verification") f.payload = report_from(p);
  else throw std::invalid_argument("unknown payload type '" + type + "'");
  return f;
}

std::string render_json(const ResultFile& file) { return to_json(file).dump(2) + "\n"; }

std::string render_csv(const ResultFile& file) {
  std::ostringstream out;
  std::visit(CsvVisitor{file.manifest, out}, file.payload);
  return out.str();
}

std::string render(const ResultFile& file, OutputFormat format) {
  return format == OutputFormat::json ? render_json(file) : render_csv(file);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading: " + std::strerror(errno));
  std::ostringstream s;
  s << in.rdbuf();
  if (in.bad()) throw IoError("read from '" + path.string() + "' failed");
  return s.str();
}

void write_results(const ResultFile& file, OutputFormat format, const std::filesystem::path& path) {
  write_text(path, render(file, format));
}

ResultFile read_results_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return result_file_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw IoError("malformed result file '" + path.string() + "': " + e.what());
  }
}

std::string render_plot_data(const SweepResult& sweep) {
  std::vector<std::string> order;
  for (const SweepRow& r : sweep.rows) {
    if (std::find(order.begin(), order.end(), r.series) == order.end()) order.push_back(r.series);
  }
  std::ostringstream out;
  for (std::size_t b = 0; b < order.size(); ++b) {
    if (b > 0) out << "\n\n";
    out << "# " << order[b] << '\n';
    for (const SweepRow* r : sweep.series(order[b])) {
      const double err = r->estimate ? r->estimate->half_width() : 0.0;
      out << r->n << ' ' << format_real(r->value()) << ' ' << format_real(err) << '\n';
    }
  }
  return out.str();
}

void emit_plot_data(const SweepResult& sweep, const std::filesystem::path& path) {
  write_text(path, render_plot_data(sweep));
}

}  // namespace smp

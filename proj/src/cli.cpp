#include "smp/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <sstream>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "smp/bounds.hpp"
#include "smp/experiments.hpp"
#include "smp/io.hpp"
#include "smp/oracle.hpp"
#include "smp/parallel.hpp"
#include "smp/simulation.hpp"
#include "smp/verification.hpp"

namespace smp {

namespace {

using nlohmann::json;

std::string printf_string(const char* fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

std::string key_of(const std::string& flag) {
  std::string key = flag.substr(flag.find_first_not_of('-'));
  for (char& c : key) {
    if (c == '-') c = '_';
  }
  return key;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Flags > config file > built-in defaults; every resolved value is echoed.
class Resolver {
 public:
  explicit Resolver(json config) : config_(std::move(config)) {}

  template <class T>
  T pick(const CLI::Option* option, const T& flag, const std::string& key, const T& fallback) {
    T value = fallback;
    if (option != nullptr && option->count() > 0) {
      value = flag;
    } else if (config_.contains(key)) {
      value = config_.at(key).get<T>();
    }
    echo_[key] = value;
    return value;
  }

  std::uint64_t seed(const CLI::Option* option, const std::string& flag) {
    std::string text = "default";
    if (option != nullptr && option->count() > 0) {
      text = flag;
    } else if (config_.contains("seed")) {
      const json& s = config_.at("seed");
      text = s.is_string() ? s.get<std::string>() : std::to_string(s.get<std::uint64_t>());
    }
    if (text == "default") return kDefaultSeed;
    if (text == "random") {
      std::random_device rd;
      return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    std::size_t used = 0;
    std::uint64_t value = 0;
    try {
      value = std::stoull(text, &used, 0);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw std::invalid_argument("malformed seed '" + text + "'");
    return value;
  }

  const json& echo() const { return echo_; }
  const json& config() const { return config_; }

 private:
  json config_;
  json echo_ = json::object();
};

template <class T>
struct Param {
  std::string key;
  T fallback;
  std::shared_ptr<T> value = std::make_shared<T>();
  CLI::Option* option = nullptr;

  T operator()(Resolver& r) const { return r.pick(option, *value, key, fallback); }
};

template <class T>
Param<T> param(CLI::App* app, const std::string& flag, T fallback, const std::string& help) {
  Param<T> p{key_of(flag), fallback};
  p.option = app->add_option(flag, *p.value, help);
  if constexpr (!std::is_same_v<T, std::string>) {
    if constexpr (requires { typename T::value_type; }) p.option->delimiter(',');
  }
  return p;
}

struct Common {
  std::string seed;
  std::optional<int> workers;
  std::string format = "json";
  std::string out;
  std::string plot;
  std::string config;
  bool timestamps = false;
  CLI::Option* seed_option = nullptr;
  CLI::Option* format_option = nullptr;
};

struct Context {
  const std::vector<std::string>& args;
  std::ostream& out;
  std::ostream& err;
  Common common;
  std::string command;
};

struct Outcome {
  Payload payload;
  std::string summary;
  bool failed = false;
};

using Runner = std::function<Outcome(Resolver&, std::uint64_t seed)>;

void add_common(CLI::App* app, Common& c) {
  c.seed_option = app->add_option("--seed", c.seed, "master seed: integer, 'default' or 'random'");
  app->add_option("--workers", c.workers, "worker threads (default: $SMP_WORKERS or all cores)");
  c.format_option = app->add_option("--format", c.format, "result file format")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--out", c.out, "write the result file here ('-' for stdout)");
  app->add_option("--plot", c.plot, "write gnuplot series here (sweeps only)");
  app->add_option("--config", c.config, "JSON file with default values for any flag");
  app->add_flag("--timestamps", c.timestamps, "record wall-clock start and finish in the manifest");
}

// The command line as recorded in the manifest: options that cannot change
// the payload are dropped so that the file itself is reproducible.
std::vector<std::string> recorded_command_line(const std::vector<std::string>& args) {
  static const std::vector<std::string> with_value{"--workers", "--out", "--plot"};
  std::vector<std::string> kept;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--timestamps") continue;
    if (std::find(with_value.begin(), with_value.end(), a) != with_value.end()) {
      ++i;
      continue;
    }
    const bool joined = std::any_of(with_value.begin(), with_value.end(),
                                    [&](const std::string& f) { return a.rfind(f + "=", 0) == 0; });
    if (!joined) kept.push_back(a);
  }
  return kept;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string describe(const TrialOutcome& t) {
  std::ostringstream s;
  s << "round zeros ones\n";
  for (std::size_t r = 0; r < t.trajectory.size(); ++r) {
    s << r << ' ' << t.trajectory[r].zeros << ' ' << t.trajectory[r].ones << '\n';
  }
  s << "consensus: " << yes_no(t.consensus) << "\nmajority consensus: " << yes_no(t.majority_consensus) << '\n';
  return s.str();
}

std::string describe(const Estimate& e, const std::string& event) {
  std::ostringstream s;
  s << event << ": p_hat " << printf_string("%.6g", e.p_hat) << " (" << e.successes << '/' << e.trials << "), CI ["
    << printf_string("%.6g", e.ci_low) << ", " << printf_string("%.6g", e.ci_high) << "]\n";
  return s.str();
}

std::string describe(const BoundReport& b) {
  std::ostringstream s;
  s << to_string(b.bound_name) << ": bound " << printf_string("%.3e", b.bound_value) << " ("
    << format_real(b.bound_value) << ")\n";
  if (b.lower_value) s << "lower " << format_real(*b.lower_value) << '\n';
  if (b.empirical_value) s << "exact " << format_real(*b.empirical_value) << '\n';
  if (b.satisfied) s << "satisfied: " << yes_no(*b.satisfied) << '\n';
  return s.str();
}

std::string describe(const CountDistribution& d) {
  std::ostringstream s;
  s << "zeros probability\n";
  for (Count z = 0; z <= d.total; ++z) s << z << ' ' << format_real(d.at(z)) << '\n';
  return s.str();
}

std::string describe(const SweepResult& sweep) {
  std::ostringstream s;
  s << "series n delta rounds event value ci_low ci_high exact bound\n";
  for (const SweepRow& r : sweep.rows) {
    s << r.series << ' ' << r.n << ' ' << r.delta << ' ' << r.rounds << ' ' << r.event << ' '
      << printf_string("%.6g", r.value());
    if (r.estimate) {
      s << ' ' << printf_string("%.6g", r.estimate->ci_low) << ' ' << printf_string("%.6g", r.estimate->ci_high);
    } else {
      s << " - -";
    }
    s << ' ' << (r.exact ? printf_string("%.6g", *r.exact) : "-");
    s << ' ' << (r.bound ? to_string(r.bound->bound_name) + "=" + printf_string("%.4g", r.bound->bound_value) : "-");
    s << '\n';
  }
  for (const auto& [k, v] : sweep.summary) s << k << " = " << printf_string("%.6g", v) << '\n';
  return s.str();
}

std::string describe(const VerificationReport& r) {
  std::ostringstream s;
  for (const CriterionResult& c : r.criteria) {
    s << (c.passed ? "PASS " : "FAIL ") << c.id << ' ' << c.title << ": " << c.detail << '\n';
  }
  const auto passed = std::count_if(r.criteria.begin(), r.criteria.end(), [](const auto& c) { return c.passed; });
  s << r.suite << ": " << passed << '/' << r.criteria.size() << " passed\n";
  return s.str();
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  const std::string text = read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed config '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config '" + path + "' must be a JSON object");
  return j;
}

int execute(Context& ctx, const Runner& runner) {
  const std::optional<std::string> started =
      ctx.common.timestamps ? std::optional<std::string>(utc_now()) : std::nullopt;
  Resolver resolver(load_config(ctx.common.config));
  const std::uint64_t seed = resolver.seed(ctx.common.seed_option, ctx.common.seed);
  const std::string format_name = resolver.pick(ctx.common.format_option, ctx.common.format, "format",
                                                std::string("json"));
  const OutputFormat format = output_format_from_string(format_name);
  const int workers = resolve_workers(ctx.common.workers);
  const WorkerScope scope(workers);

  Outcome outcome = runner(resolver, seed);

  ResultFile file{RunManifest{}, std::move(outcome.payload)};
  file.manifest.master_seed = seed;
  file.manifest.config_echo = resolver.echo();
  file.manifest.config_echo["command"] = ctx.command;
  file.manifest.command_line = recorded_command_line(ctx.args);
  if (ctx.common.timestamps) {
    file.manifest.started = started;
    file.manifest.finished = utc_now();
  }

  if (ctx.common.out == "-") {
    ctx.out << render(file, format);
  } else {
    ctx.out << outcome.summary;
    if (!ctx.common.out.empty()) write_results(file, format, ctx.common.out);
  }
  if (!ctx.common.plot.empty()) {
    if (const auto* sweep = std::get_if<SweepResult>(&file.payload)) {
      emit_plot_data(*sweep, ctx.common.plot);
    } else if (const auto* report = std::get_if<VerificationReport>(&file.payload); report && !report->sweeps.empty()) {
      emit_plot_data(report->sweeps.front(), ctx.common.plot);
    } else {
      throw std::invalid_argument("--plot needs a sweep result");
    }
  }
  return outcome.failed ? kExitVerifyFailed : kExitOk;
}

ProtocolConfig protocol(Count n, Count delta, double q, int rounds) {
  ProtocolConfig c;
  c.n = n;
  c.delta = delta;
  c.rounds = rounds;
  c.network = NetworkModel(q);
  c.validate();
  return c;
}

SimulationPath path_from_string(const std::string& s) {
  if (s == "aggregated") return SimulationPath::aggregated;
  if (s == "per-agent") return SimulationPath::per_agent;
  throw std::invalid_argument("unknown simulation path '" + s + "'");
}

AsymmetryRegime regime_from_string(const std::string& s, double alpha, double beta) {
  if (s == "zero") return AsymmetryRegime::zero();
  if (s == "log") return AsymmetryRegime::logarithmic();
  if (s == "sqrt") return AsymmetryRegime::sqrt_scaled(alpha);
  if (s == "power") return AsymmetryRegime::power(beta);
  throw std::invalid_argument("unknown regime '" + s + "' (zero, log, sqrt, power)");
}

// Bytes of `verify theorem1` at the given worker count, for the determinism check.
DeterminismProbe determinism_probe(std::uint64_t seed) {
  return [seed](int workers) {
    const std::filesystem::path path = std::filesystem::temp_directory_path() /
                                       ("smp-determinism-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(workers) + ".json");
    std::ostringstream sink;
    const int code = cli_main({"smp", "verify", "theorem1", "--q", "0.5", "--seed", std::to_string(seed), "--workers",
                               std::to_string(workers), "--out", path.string()},
                              sink, sink);
    std::string bytes;
    if (code != kExitUsage && std::filesystem::exists(path)) bytes = read_text(path);
    std::filesystem::remove(path);
    return bytes;
  };
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simple majority protocol over 2n agents with i.i.d. message loss", "smp"};
  app.require_subcommand(1);
  std::vector<std::pair<CLI::App*, Runner>> leaves;
  std::map<CLI::App*, std::string> names;
  std::map<CLI::App*, std::unique_ptr<Common>> commons;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    add_common(sub, *(commons[sub] = std::make_unique<Common>()));
    names[sub] = parent == &app ? name : parent->get_name() + " " + name;
    return sub;
  };

  // simulate
  {
    CLI::App* s = leaf(&app, "simulate", "run one trial and print its trajectory");
    auto n = param<Count>(s, "--n", 100, "half the agent count");
    auto delta = param<Count>(s, "--delta", 0, "initial zeros minus n");
    auto q = param<double>(s, "--q", 0.5, "message loss probability");
    auto rounds = param<int>(s, "--rounds", 3, "rounds");
    auto trial = param<Count>(s, "--trial", 0, "trial index");
    auto path = param<std::string>(s, "--path", "aggregated", "aggregated or per-agent");
    leaves.emplace_back(s, [=](Resolver& r, std::uint64_t seed) {
      const ProtocolConfig c = protocol(n(r), delta(r), q(r), rounds(r));
      const Count index = trial(r);
      if (index < 0 || index > static_cast<Count>(UINT32_MAX)) throw std::invalid_argument("trial index out of range");
      TrialOutcome t = run_trial(c, static_cast<std::uint32_t>(index), seed, path_from_string(path(r)));
      const std::string text = describe(t);
      return Outcome{std::move(t), text};
    });
  }

  // estimate
  {
    CLI::App* s = leaf(&app, "estimate", "Monte Carlo probability of a consensus event");
    auto n = param<Count>(s, "--n", 100, "half the agent count");
    auto delta = param<Count>(s, "--delta", 0, "initial zeros minus n");
    auto q = param<double>(s, "--q", 0.5, "message loss probability");
    auto rounds = param<int>(s, "--rounds", 3, "rounds");
    auto trials = param<Count>(s, "--trials", 10000, "trials");
    auto event = param<std::string>(s, "--event", "consensus", "consensus, majority_consensus or majority_failure");
    auto interval = param<std::string>(s, "--interval", "wilson", "wilson or clopper-pearson");
    auto confidence = param<double>(s, "--confidence", 0.95, "interval confidence");
    auto path = param<std::string>(s, "--path", "aggregated", "aggregated or per-agent");
    leaves.emplace_back(s, [=](Resolver& r, std::uint64_t seed) {
      const ProtocolConfig c = protocol(n(r), delta(r), q(r), rounds(r));
      const Event e = Event::from_string(event(r));
      EstimateOptions o;
      o.interval = interval_method_from_string(interval(r));
      o.confidence = confidence(r);
      o.path = path_from_string(path(r));
      Estimate est = estimate_event_probability(c, e, trials(r), seed, o);
      const std::string text = describe(est, e.name());
      return Outcome{est, text};
    });
  }

  // sweep
  {
    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweeps");
    sweep->require_subcommand(1);
    {
      CLI::App* s = leaf(sweep, "trichotomy", "exact one-round keep probability per asymmetry regime");
      auto q = param<double>(s, "--q", 0.5, "message loss probability");
      auto grid = param<std::vector<Count>>(s, "--n-grid", {100, 1000, 10000}, "values of n");
      auto regimes = param<std::vector<std::string>>(s, "--regimes", {"zero", "sqrt", "power"}, "zero, log, sqrt, power");
      auto alpha = param<double>(s, "--alpha", 1.0, "sqrt regime scale");
      auto beta = param<double>(s, "--beta", 0.75, "power regime exponent");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t) {
        const double a = alpha(r);
        const double b = beta(r);
        std::vector<AsymmetryRegime> list;
        for (const std::string& name : regimes(r)) list.push_back(regime_from_string(name, a, b));
        SweepResult res = trichotomy_sweep(list, grid(r), q(r));
        const std::string text = describe(res);
        return Outcome{std::move(res), text};
      });
    }
    {
      CLI::App* s = leaf(sweep, "max-error", "majority-consensus failure rate across initial asymmetries");
      auto n = param<Count>(s, "--n", 200, "half the agent count");
      auto q = param<double>(s, "--q", 0.5, "message loss probability");
      auto rounds = param<int>(s, "--rounds", 3, "rounds");
      auto trials = param<Count>(s, "--trials", 2000, "trials per point");
      auto step = param<Count>(s, "--delta-step", 1, "spacing of the asymmetry grid");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t seed) {
        SweepResult res = max_error_sweep(n(r), q(r), rounds(r), trials(r), seed, step(r));
        const std::string text = describe(res);
        return Outcome{std::move(res), text};
      });
    }
    {
      CLI::App* s = leaf(sweep, "return-to-symmetry", "probability of returning to the tied state after one round");
      auto grid = param<std::vector<Count>>(s, "--n-grid", {100, 400, 1600}, "values of n");
      auto q = param<double>(s, "--q", 0.5, "message loss probability");
      auto trials = param<Count>(s, "--trials", 100000, "trials per n");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t seed) {
        SweepResult res = return_to_symmetry_rate(grid(r), q(r), trials(r), seed);
        const std::string text = describe(res);
        return Outcome{std::move(res), text};
      });
    }
    {
      CLI::App* s = leaf(sweep, "symmetry-break", "one-round fluctuation statistics from the tied state");
      auto n = param<Count>(s, "--n", 10000, "half the agent count");
      auto q = param<double>(s, "--q", 0.5, "message loss probability");
      auto trials = param<Count>(s, "--trials", 10000, "trials");
      auto deltas = param<std::vector<double>>(s, "--deltas", {0.25, 0.5, 1.0, 1.5}, "thresholds on |N-n|/sqrt(n)");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t seed) {
        SweepResult res = to_sweep(symmetry_break_statistics(n(r), q(r), trials(r), seed, deltas(r)));
        const std::string text = describe(res);
        return Outcome{std::move(res), text};
      });
    }
  }

  // bounds
  {
    CLI::App* bounds = app.add_subcommand("bounds", "closed-form bounds");
    bounds->require_subcommand(1);
    {
      CLI::App* s = leaf(bounds, "prop1", "one-round majority-consensus error bound from n+A zeros");
      auto n = param<Count>(s, "--n", 100, "half the agent count");
      auto a = param<Count>(s, "--a", 50, "asymmetry A");
      auto q = param<double>(s, "--q", 0.5, "message loss probability");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t) {
        BoundReport b = prop1_report(n(r), a(r), q(r));
        return Outcome{b, describe(b)};
      });
    }
    {
      CLI::App* s = leaf(bounds, "prop4", "tail bound 2 exp(-B^2/n) on the one-round deviation");
      auto n = param<Count>(s, "--n", 100, "half the agent count");
      auto b = param<Count>(s, "--b", 30, "deviation B");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t) {
        BoundReport rep = prop4_report(n(r), b(r));
        return Outcome{rep, describe(rep)};
      });
    }
    {
      CLI::App* s = leaf(bounds, "prop5", "one-round consensus bound from n+C zeros");
      auto n = param<Count>(s, "--n", 100, "half the agent count");
      auto c = param<Count>(s, "--c", 0, "asymmetry C");
      auto q = param<double>(s, "--q", 0.5, "message loss probability");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t) {
        BoundReport rep = prop5_report(n(r), c(r), q(r));
        return Outcome{rep, describe(rep)};
      });
    }
    {
      CLI::App* s = leaf(bounds, "pn-sandwich", "bracket around the symmetric keep probability");
      auto n = param<Count>(s, "--n", 10000, "half the agent count");
      auto q = param<double>(s, "--q", 0.5, "message loss probability");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t) {
        BoundReport rep = pn_sandwich_report(n(r), q(r));
        return Outcome{rep, describe(rep)};
      });
    }
    {
      CLI::App* s = leaf(bounds, "stirling", "Stirling bracket around a binomial point mass");
      auto m = param<Count>(s, "--m", 10, "trials");
      auto p = param<double>(s, "--p", 0.5, "success probability");
      auto k = param<Count>(s, "--k", 5, "point");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t) {
        BoundReport rep = stirling_report(m(r), p(r), k(r));
        return Outcome{rep, describe(rep)};
      });
    }
    {
      CLI::App* s = leaf(bounds, "theorem2-envelope", "envelope 3/n^C(q) of two-round consensus from a tie");
      auto n = param<Count>(s, "--n", 10000, "half the agent count");
      auto q = param<double>(s, "--q", 0.5, "message loss probability");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t) {
        BoundReport rep = theorem2_envelope_report(n(r), q(r));
        return Outcome{rep, describe(rep)};
      });
    }
  }

  // oracle
  {
    CLI::App* oracle = app.add_subcommand("oracle", "exact computations for small systems");
    oracle->require_subcommand(1);
    {
      CLI::App* s = leaf(oracle, "exhaustive", "one-round law by enumerating every loss pattern (2n <= 6)");
      auto zeros = param<Count>(s, "--zeros", 2, "agents holding 0");
      auto ones = param<Count>(s, "--ones", 2, "agents holding 1");
      auto q = param<double>(s, "--q", 0.5, "message loss probability");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t) {
        CountDistribution d = exhaustive_round_distribution(OpinionCounts{zeros(r), ones(r)}, q(r));
        const std::string text = describe(d);
        return Outcome{std::move(d), text};
      });
    }
    {
      CLI::App* s = leaf(oracle, "exact-chain", "exact consensus probabilities of the count chain (2n <= 1000)");
      auto n = param<Count>(s, "--n", 1, "half the agent count");
      auto delta = param<Count>(s, "--delta", 0, "initial zeros minus n");
      auto q = param<double>(s, "--q", 0.5, "message loss probability");
      auto rounds = param<int>(s, "--rounds", 3, "rounds");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t) {
        const ProtocolConfig c = protocol(n(r), delta(r), q(r), rounds(r));
        const ChainProbabilities p = exact_chain_consensus_probability(c.n, c.delta, c.network.q(), c.rounds);
        SweepResult res;
        res.kind = "exact_chain";
        for (const auto& [event, value] : {std::pair{"consensus", p.p_consensus}, {"majority_consensus", p.p_majority}}) {
          SweepRow row;
          row.series = "exact";
          row.n = c.n;
          row.delta = c.delta;
          row.q = c.network.q();
          row.rounds = c.rounds;
          row.event = event;
          row.exact = value;
          res.rows.push_back(row);
        }
        const std::string text = "consensus probability " + format_real(p.p_consensus) +
                                 "\nmajority consensus probability " + format_real(p.p_majority) + "\n";
        return Outcome{std::move(res), text};
      });
    }
  }

  // verify
  {
    CLI::App* verify = app.add_subcommand("verify", "pass/fail checks; exit 2 on any failure");
    verify->require_subcommand(1);
    {
      CLI::App* s = leaf(verify, "theorem1", "one-, two- and three-round presets");
      const Theorem1Check d;
      auto q = param<double>(s, "--q", d.q, "message loss probability");
      auto grid = param<std::vector<Count>>(s, "--n-grid", d.n_grid, "values of n");
      auto trials = param<Count>(s, "--trials", d.trials, "trials per point");
      auto alpha = param<double>(s, "--alpha", d.alpha, "sqrt regime scale");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t seed) {
        Theorem1Check c{q(r), grid(r), trials(r), alpha(r)};
        VerificationReport rep = verify_theorem1(c, seed);
        const std::string text = describe(rep);
        const bool failed = !rep.passed();
        return Outcome{std::move(rep), text, failed};
      });
    }
    {
      CLI::App* s = leaf(verify, "theorem2", "two-round consensus decay from a tie");
      const Theorem2Check d;
      auto q = param<double>(s, "--q", d.q, "message loss probability");
      auto grid = param<std::vector<Count>>(s, "--n-grid", d.n_grid, "values of n");
      auto trials = param<Count>(s, "--trials", d.trials, "trials per point");
      auto chain_n = param<Count>(s, "--chain-n", d.chain_n, "n of the exact-chain comparison");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t seed) {
        Theorem2Check c{q(r), grid(r), trials(r), chain_n(r)};
        VerificationReport rep = verify_theorem2(c, seed);
        const std::string text = describe(rep);
        const bool failed = !rep.passed();
        return Outcome{std::move(rep), text, failed};
      });
    }
    {
      CLI::App* s = leaf(verify, "properties", "oracle, analytic and statistical property checks");
      leaves.emplace_back(s, [=](Resolver&, std::uint64_t seed) {
        VerificationReport rep = verify_criteria("properties", property_criteria(), seed);
        const std::string text = describe(rep);
        const bool failed = !rep.passed();
        return Outcome{std::move(rep), text, failed};
      });
    }
    {
      CLI::App* s = leaf(verify, "acceptance", "every acceptance criterion");
      std::vector<int> all;
      for (int i = 1; i <= kCriterionCount; ++i) all.push_back(i);
      auto only = param<std::vector<int>>(s, "--only", all, "criterion ids to run");
      leaves.emplace_back(s, [=](Resolver& r, std::uint64_t seed) {
        VerificationReport rep = verify_criteria("acceptance", only(r), seed, determinism_probe(seed));
        const std::string text = describe(rep);
        const bool failed = !rep.passed();
        return Outcome{std::move(rep), text, failed};
      });
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (const auto& [sub, runner] : leaves) {
    if (!sub->parsed()) continue;
    Context ctx{args, out, err, *commons[sub], names[sub]};
    try {
      return execute(ctx, runner);
    } catch (const IoError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
      err << "error: malformed config value: " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::logic_error& e) {  // invalid_argument, length_error (unsupported size)
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
  }
  err << "error: no command given\n";
  return kExitUsage;
}

}  // namespace smp

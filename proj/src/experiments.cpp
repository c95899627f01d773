#include "smp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>

#include "smp/oracle.hpp"
#include "smp/rng.hpp"
#include "smp/summation.hpp"
#include "smp/transition.hpp"

namespace smp {

namespace {

void check_trials(Count trials) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (trials > static_cast<Count>(std::numeric_limits<std::uint32_t>::max())) {
    throw std::invalid_argument("trials exceed the 2^32 trial-index space");
  }
}

ProtocolConfig make_config(Count n, Count delta, double q, int rounds) {
  ProtocolConfig c;
  c.n = n;
  c.delta = delta;
  c.rounds = rounds;
  c.network = NetworkModel(q);
  c.validate();
  return c;
}

// Seed of one sweep point; labels keep sub-experiments on disjoint streams.
std::uint64_t point_seed(std::uint64_t master, std::uint64_t experiment, Count n, Count delta,
                         int rounds = 0) {
  std::uint64_t s = derive_seed(master, experiment);
  s = derive_seed(s, static_cast<std::uint64_t>(n));
  s = derive_seed(s, static_cast<std::uint64_t>(delta));
  return derive_seed(s, static_cast<std::uint64_t>(rounds));
}

enum : std::uint64_t {
  kTheorem1Power = 1,
  kTheorem1Sqrt,
  kTheorem1Symmetric,
  kTheorem2,
  kMaxError,
  kReturn,
  kSymmetryBreak,
};

bool chain_applies(Count n) { return 2 * n <= kExactChainMaxAgents; }

SweepRow base_row(std::string series, Count n, Count delta, double q, int rounds, std::string event) {
  SweepRow row;
  row.series = std::move(series);
  row.n = n;
  row.delta = delta;
  row.q = q;
  row.rounds = rounds;
  row.event = std::move(event);
  return row;
}

}  // namespace

std::string to_string(IntervalMethod method) {
  return method == IntervalMethod::wilson ? "wilson" : "clopper-pearson";
}

IntervalMethod interval_method_from_string(const std::string& s) {
  if (s == "wilson") return IntervalMethod::wilson;
  if (s == "clopper-pearson") return IntervalMethod::clopper_pearson;
  throw std::invalid_argument("unknown interval method '" + s + "'");
}

Estimate make_estimate(Count successes, Count trials, IntervalMethod method, double confidence) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (successes < 0 || successes > trials) throw std::invalid_argument("successes must lie in [0, trials]");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0,1)");
  Estimate e;
  e.successes = successes;
  e.trials = trials;
  const double total = static_cast<double>(trials);
  e.p_hat = static_cast<double>(successes) / total;
  const double alpha = 1.0 - confidence;

  if (method == IntervalMethod::wilson) {
    const double z = boost::math::quantile(boost::math::normal(), 1.0 - alpha / 2.0);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / total;
    const double center = (e.p_hat + z2 / (2.0 * total)) / denom;
    const double half = z / denom * std::sqrt(e.p_hat * (1.0 - e.p_hat) / total + z2 / (4.0 * total * total));
    e.ci_low = std::max(0.0, center - half);
    e.ci_high = std::min(1.0, center + half);
  } else {
    const double s = static_cast<double>(successes);
    e.ci_low = successes == 0 ? 0.0 : boost::math::ibeta_inv(s, total - s + 1.0, alpha / 2.0);
    e.ci_high = successes == trials ? 1.0 : boost::math::ibeta_inv(s + 1.0, total - s, 1.0 - alpha / 2.0);
  }
  // rounding at p_hat in {0, 1}
  e.ci_low = std::min(e.ci_low, e.p_hat);
  e.ci_high = std::max(e.ci_high, e.p_hat);
  return e;
}

Event Event::consensus() {
  return Event("consensus", [](const TrialOutcome& t) { return t.consensus; });
}

Event Event::majority_consensus() {
  return Event("majority_consensus", [](const TrialOutcome& t) { return t.majority_consensus; });
}

Event Event::majority_failure() {
  return Event("majority_failure", [](const TrialOutcome& t) { return !t.majority_consensus; });
}

Event Event::custom(std::string name, std::function<bool(const TrialOutcome&)> predicate) {
  if (!predicate) throw std::invalid_argument("custom event needs a predicate");
  return Event(std::move(name), std::move(predicate));
}

Event Event::from_string(const std::string& name) {
  if (name == "consensus") return consensus();
  if (name == "majority_consensus" || name == "majority") return majority_consensus();
  if (name == "majority_failure") return majority_failure();
  throw std::invalid_argument("unknown event '" + name + "'");
}

Estimate estimate_event_probability(const ProtocolConfig& config, const Event& event, Count trials,
                                    std::uint64_t master_seed, const EstimateOptions& options) {
  config.validate();
  check_trials(trials);
  Count successes = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : successes)
  for (Count i = 0; i < trials; ++i) {
    if (event(run_trial(config, static_cast<std::uint32_t>(i), master_seed, options.path))) ++successes;
  }
  return make_estimate(successes, trials, options.interval, options.confidence);
}

namespace serial {

Estimate estimate_event_probability(const ProtocolConfig& config, const Event& event, Count trials,
                                    std::uint64_t master_seed, const EstimateOptions& options) {
  config.validate();
  check_trials(trials);
  Count successes = 0;
  for (Count i = 0; i < trials; ++i) {
    if (event(run_trial(config, static_cast<std::uint32_t>(i), master_seed, options.path))) ++successes;
  }
  return make_estimate(successes, trials, options.interval, options.confidence);
}

}  // namespace serial

std::vector<Count> round_one_zero_counts(Count n, double q, Count trials, std::uint64_t master_seed) {
  check_trials(trials);
  const ProtocolConfig config = make_config(n, 0, q, 1);
  std::vector<Count> zeros(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic, 256)
  for (Count i = 0; i < trials; ++i) {
    zeros[static_cast<std::size_t>(i)] =
        run_trial(config, static_cast<std::uint32_t>(i), master_seed).final_state().zeros;
  }
  return zeros;
}

double SweepRow::value() const {
  if (estimate) return estimate->p_hat;
  if (exact) return *exact;
  throw std::logic_error("sweep row carries neither an estimate nor an exact value");
}

std::vector<const SweepRow*> SweepResult::series(const std::string& name) const {
  std::vector<const SweepRow*> out;
  for (const SweepRow& r : rows) {
    if (r.series == name) out.push_back(&r);
  }
  return out;
}

SweepResult trichotomy_sweep(const AsymmetryRegime& regime, const std::vector<Count>& n_grid, double q) {
  return trichotomy_sweep(std::vector<AsymmetryRegime>{regime}, n_grid, q);
}

SweepResult trichotomy_sweep(const std::vector<AsymmetryRegime>& regimes,
                             const std::vector<Count>& n_grid, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("trichotomy sweep needs q in (0,1)");
  SweepResult result;
  result.kind = "trichotomy";
  result.notes.push_back("asymmetries a_n are rounded up to integers");
  result.notes.push_back("sqrt_scaled predicted_limit is Phi(t0), a reading of the decide-one limit");
  for (const AsymmetryRegime& regime : regimes) {
    for (Count n : n_grid) {
      const Count a = regime.asymmetry_at(n);
      if (a > n) throw std::invalid_argument("asymmetry exceeds n on the grid");
      SweepRow row = base_row(regime.label(), n, a, q, 1, "keep_zero");
      row.exact = keep_zero_probability(n + a, n - a, q);
      row.predicted_limit = regime.predicted_limit(q);
      if (a == 0 && n >= 2) row.bound = pn_sandwich_report(n, q);
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

SymmetryBreakStatistics symmetry_break_statistics(Count n, double q, Count trials,
                                                  std::uint64_t master_seed,
                                                  const std::vector<double>& delta_grid) {
  const std::vector<Count> zeros =
      round_one_zero_counts(n, q, trials, point_seed(master_seed, kSymmetryBreak, n, 0));
  const double root = std::sqrt(static_cast<double>(n));
  std::vector<double> x(zeros.size());
  CompensatedSum sum;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    x[i] = static_cast<double>(zeros[i] - n) / root;
    sum.add(x[i]);
  }
  SymmetryBreakStatistics s;
  s.n = n;
  s.q = q;
  s.trials = trials;
  s.mean = sum.value() / static_cast<double>(trials);
  CompensatedSum squares;
  for (double v : x) squares.add((v - s.mean) * (v - s.mean));
  s.variance = trials > 1 ? squares.value() / static_cast<double>(trials - 1) : 0.0;
  for (double d : delta_grid) {
    const auto outside = std::count_if(x.begin(), x.end(), [d](double v) { return std::fabs(v) >= d; });
    s.fraction_outside.emplace_back(d, static_cast<double>(outside) / static_cast<double>(trials));
  }
  return s;
}

SweepResult to_sweep(const SymmetryBreakStatistics& stats) {
  SweepResult result;
  result.kind = "symmetry_break";
  result.summary["mean"] = stats.mean;
  result.summary["variance"] = stats.variance;
  for (const auto& [d, fraction] : stats.fraction_outside) {
    char label[64];
    std::snprintf(label, sizeof label, "abs_deviation_ge_%.17g", d);
    SweepRow row = base_row("fraction_outside", stats.n, 0, stats.q, 1, label);
    row.estimate = make_estimate(static_cast<Count>(std::llround(fraction * static_cast<double>(stats.trials))),
                                 stats.trials);
    result.rows.push_back(std::move(row));
  }
  return result;
}

SweepResult theorem1_suite(double q, const std::vector<Count>& n_grid, Count trials,
                           std::uint64_t master_seed, double alpha) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("theorem presets need q in (0,1)");
  SweepResult result;
  result.kind = "theorem1";
  result.notes.push_back("asymmetries are rounded up to integers");
  const AsymmetryRegime power = AsymmetryRegime::power(0.75);
  const AsymmetryRegime sqrt_scaled = AsymmetryRegime::sqrt_scaled(alpha);

  for (Count n : n_grid) {
    const Count a = std::min(power.asymmetry_at(n), n);
    SweepRow row = base_row("smp1_power", n, a, q, 1, "majority_failure");
    row.estimate = estimate_event_probability(make_config(n, a, q, 1), Event::majority_failure(), trials,
                                              point_seed(master_seed, kTheorem1Power, n, a));
    if (chain_applies(n)) row.exact = 1.0 - exact_chain_consensus_probability(n, a, q, 1).p_majority;
    row.bound = prop1_report(n, std::min(a, n - 1), q);
    row.bound->attach(row.estimate->p_hat);
    result.rows.push_back(std::move(row));
  }
  for (Count n : n_grid) {
    const Count a = std::min(sqrt_scaled.asymmetry_at(n), n);
    SweepRow row = base_row("smp2_sqrt", n, a, q, 2, "majority_consensus");
    row.estimate = estimate_event_probability(make_config(n, a, q, 2), Event::majority_consensus(), trials,
                                              point_seed(master_seed, kTheorem1Sqrt, n, a));
    if (chain_applies(n)) row.exact = exact_chain_consensus_probability(n, a, q, 2).p_majority;
    result.rows.push_back(std::move(row));
  }
  for (Count n : n_grid) {
    SweepRow row = base_row("smp3_symmetric", n, 0, q, 3, "consensus");
    row.estimate = estimate_event_probability(make_config(n, 0, q, 3), Event::consensus(), trials,
                                              point_seed(master_seed, kTheorem1Symmetric, n, 0));
    if (chain_applies(n)) row.exact = exact_chain_consensus_probability(n, 0, q, 3).p_consensus;
    result.rows.push_back(std::move(row));
  }
  return result;
}

SweepResult theorem2_suite(double q, const std::vector<Count>& n_grid, Count trials,
                           std::uint64_t master_seed) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("theorem presets need q in (0,1)");
  SweepResult result;
  result.kind = "theorem2";
  result.summary["envelope_exponent"] = theorem2_exponent(q);
  for (Count n : n_grid) {
    SweepRow row = base_row("smp2_symmetric", n, 0, q, 2, "consensus");
    row.estimate = estimate_event_probability(make_config(n, 0, q, 2), Event::consensus(), trials,
                                              point_seed(master_seed, kTheorem2, n, 0));
    if (chain_applies(n)) row.exact = exact_chain_consensus_probability(n, 0, q, 2).p_consensus;
    row.bound = theorem2_envelope_report(n, q);
    row.bound->attach(row.estimate->p_hat);
    result.rows.push_back(std::move(row));
  }
  return result;
}

SweepResult max_error_sweep(Count n, double q, int rounds, Count trials_per_point,
                            std::uint64_t master_seed, Count delta_step) {
  if (delta_step < 1) throw std::invalid_argument("delta step must be positive");
  SweepResult result;
  result.kind = "max_error";
  std::vector<Count> deltas;
  for (Count d = 0; d < n; d += delta_step) deltas.push_back(d);
  deltas.push_back(n);

  std::optional<CountChain> chain;
  if (chain_applies(n)) chain.emplace(n, q);
  for (Count d : deltas) {
    SweepRow row = base_row("failure", n, d, q, rounds, "majority_failure");
    row.estimate = estimate_event_probability(make_config(n, d, q, rounds), Event::majority_failure(),
                                              trials_per_point, point_seed(master_seed, kMaxError, n, d, rounds));
    if (chain) {
      const OpinionCounts initial = make_initial_state(n, d);
      row.exact = 1.0 - consensus_probabilities(chain->evolve(initial, rounds), initial).p_majority;
    }
    result.rows.push_back(std::move(row));
  }

  auto score = [](const SweepRow& r) { return r.exact ? *r.exact : r.estimate->p_hat; };
  const auto worst = std::max_element(result.rows.begin(), result.rows.end(),
                                      [&](const SweepRow& a, const SweepRow& b) { return score(a) < score(b); });
  SweepRow argmax = *worst;
  argmax.series = "argmax";
  result.summary["argmax_delta"] = static_cast<double>(argmax.delta);
  result.summary["max_error"] = score(argmax);
  result.rows.push_back(std::move(argmax));
  return result;
}

SweepResult return_to_symmetry_rate(const std::vector<Count>& n_grid, double q, Count trials,
                                    std::uint64_t master_seed) {
  SweepResult result;
  result.kind = "return_to_symmetry";
  CompensatedSum num;
  CompensatedSum den;
  for (Count n : n_grid) {
    const std::vector<Count> zeros = round_one_zero_counts(n, q, trials, point_seed(master_seed, kReturn, n, 0));
    const auto hits = std::count(zeros.begin(), zeros.end(), n);
    SweepRow row = base_row("estimate", n, 0, q, 1, "return_to_symmetry");
    row.estimate = make_estimate(static_cast<Count>(hits), trials);
    row.exact = transition_row({n, n}, q).at(n);
    const double inv_root = 1.0 / std::sqrt(static_cast<double>(n));
    num.add(row.estimate->p_hat * inv_root);
    den.add(inv_root * inv_root);
    result.rows.push_back(std::move(row));
  }
  if (n_grid.empty()) return result;
  const double c = num.value() / den.value();
  result.summary["c"] = c;
  for (Count n : n_grid) {
    SweepRow row = base_row("fit", n, 0, q, 1, "return_to_symmetry");
    row.exact = c / std::sqrt(static_cast<double>(n));
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace smp

#pragma once

// Monte Carlo estimation with confidence intervals, and the preset sweeps
// built on top of it.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smp/bounds.hpp"
#include "smp/core.hpp"
#include "smp/simulation.hpp"

namespace smp {

enum class IntervalMethod { wilson, clopper_pearson };

std::string to_string(IntervalMethod method);
IntervalMethod interval_method_from_string(const std::string& s);

struct Estimate {
  Count successes = 0;
  Count trials = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;

  double half_width() const noexcept { return 0.5 * (ci_high - ci_low); }
  bool contains(double p) const noexcept { return ci_low <= p && p <= ci_high; }

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// Two-sided interval at `confidence` around successes / trials.
Estimate make_estimate(Count successes, Count trials, IntervalMethod method = IntervalMethod::wilson,
                       double confidence = 0.95);

/// Event observed on one trial. Custom predicates run concurrently on
/// several threads and must not mutate shared state.
class Event {
 public:
  static Event consensus();
  static Event majority_consensus();
  static Event majority_failure();  // complement of majority_consensus
  static Event custom(std::string name, std::function<bool(const TrialOutcome&)> predicate);
  static Event from_string(const std::string& name);

  const std::string& name() const noexcept { return name_; }
  bool operator()(const TrialOutcome& outcome) const { return predicate_(outcome); }

 private:
  Event(std::string name, std::function<bool(const TrialOutcome&)> predicate)
      : name_(std::move(name)), predicate_(std::move(predicate)) {}

  std::string name_;
  std::function<bool(const TrialOutcome&)> predicate_;
};

struct EstimateOptions {
  SimulationPath path = SimulationPath::aggregated;
  IntervalMethod interval = IntervalMethod::wilson;
  double confidence = 0.95;
};

/// Runs trials 0..trials-1 of run_trial(config, i, master_seed) and counts
/// the event. Trials are spread over the OpenMP workers; the count does not
/// depend on scheduling.
Estimate estimate_event_probability(const ProtocolConfig& config, const Event& event, Count trials,
                                    std::uint64_t master_seed, const EstimateOptions& options = {});

/// Zero-count after one round from the symmetric start, one entry per trial.
std::vector<Count> round_one_zero_counts(Count n, double q, Count trials, std::uint64_t master_seed);

struct SweepRow {
  std::string series;  // plot block this row belongs to
  Count n = 0;
  Count delta = 0;
  double q = 0.0;
  int rounds = 1;
  std::string event;
  std::optional<Estimate> estimate;
  std::optional<double> exact;
  std::optional<BoundReport> bound;
  std::optional<double> predicted_limit;

  /// p_hat if estimated, else the exact value.
  double value() const;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepResult {
  std::string kind;
  std::vector<SweepRow> rows;
  std::map<std::string, double> summary;
  std::vector<std::string> notes;

  std::vector<const SweepRow*> series(const std::string& name) const;

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// Exact one-round keep probability p_n = keep_zero_probability(n + a_n,
/// n - a_n, q) along n_grid, with the regime's predicted limit.
SweepResult trichotomy_sweep(const AsymmetryRegime& regime, const std::vector<Count>& n_grid, double q);
SweepResult trichotomy_sweep(const std::vector<AsymmetryRegime>& regimes,
                             const std::vector<Count>& n_grid, double q);

struct SymmetryBreakStatistics {
  Count n = 0;
  double q = 0.0;
  Count trials = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  std::vector<std::pair<double, double>> fraction_outside;  // (delta, fraction with |x| >= delta)
};

/// Sample statistics of (N(X_1;0) - n) / sqrt(n) from the symmetric start.
SymmetryBreakStatistics symmetry_break_statistics(Count n, double q, Count trials,
                                                  std::uint64_t master_seed,
                                                  const std::vector<double>& delta_grid = {0.25, 0.5, 1.0, 1.5});
SweepResult to_sweep(const SymmetryBreakStatistics& stats);

/// Three sub-experiments per n in n_grid: SMP(1) from ceil(n^{3/4}) extra
/// zeros against the union bound, SMP(2) from ceil(alpha sqrt(n)), and
/// SMP(3) from the symmetric start.
SweepResult theorem1_suite(double q, const std::vector<Count>& n_grid, Count trials,
                           std::uint64_t master_seed, double alpha = 1.0);

/// SMP(2) consensus from the symmetric start across n_grid, with the
/// 3/n^{C(q)} envelope and the exact chain where 2n is small enough.
SweepResult theorem2_suite(double q, const std::vector<Count>& n_grid, Count trials,
                           std::uint64_t master_seed);

/// Majority-consensus failure rate per starting asymmetry 0..n (every
/// delta_step-th value, n always included), exact where the chain applies.
/// The worst point is repeated as series "argmax".
SweepResult max_error_sweep(Count n, double q, int rounds, Count trials_per_point,
                            std::uint64_t master_seed, Count delta_step = 1);

/// P{N(X_1;0) = n} from the symmetric start per n, with a least-squares
/// c / sqrt(n) fit as series "fit".
SweepResult return_to_symmetry_rate(const std::vector<Count>& n_grid, double q, Count trials,
                                    std::uint64_t master_seed);

namespace serial {

Estimate estimate_event_probability(const ProtocolConfig& config, const Event& event, Count trials,
                                    std::uint64_t master_seed, const EstimateOptions& options = {});

}  // namespace serial

}  // namespace smp

#include "smp/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "smp/binomial.hpp"
#include "smp/bounds.hpp"
#include "smp/oracle.hpp"
#include "smp/rng.hpp"
#include "smp/special.hpp"
#include "smp/transition.hpp"

namespace smp {

namespace {

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

std::uint64_t criterion_seed(std::uint64_t seed, int id) {
  return derive_seed(seed, 0x100u + static_cast<std::uint64_t>(id));
}

ProtocolConfig config_of(Count n, Count delta, double q, int rounds) {
  ProtocolConfig c;
  c.n = n;
  c.delta = delta;
  c.rounds = rounds;
  c.network = NetworkModel(q);
  return c;
}

CriterionResult result(int id, std::string title, bool passed, std::string detail) {
  return {id, std::move(title), passed, std::move(detail)};
}

}  // namespace

bool VerificationReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

std::vector<double> empirical_round_law(const OpinionCounts& counts, double q, Count trials,
                                        std::uint64_t seed, SimulationPath path) {
  require_valid(counts);
  if (counts.total() % 2 != 0) throw std::invalid_argument("agent count must be even");
  const Count n = counts.total() / 2;
  const ProtocolConfig config = config_of(n, counts.zeros - n, q, 1);
  std::vector<Count> zeros(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic, 1024)
  for (Count i = 0; i < trials; ++i) {
    zeros[static_cast<std::size_t>(i)] = run_trial(config, static_cast<std::uint32_t>(i), seed, path).final_state().zeros;
  }
  std::vector<double> law(static_cast<std::size_t>(counts.total() + 1), 0.0);
  for (Count z : zeros) law[static_cast<std::size_t>(z)] += 1.0;
  for (double& p : law) p /= static_cast<double>(trials);
  return law;
}

double prop1_error_bound_reference(Count n, Count A, double q) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big bn = n;
  const Big ba = A;
  const Big bq = q;
  const Big value = 2 * bn * sqrt((bn + ba) / (bn - ba)) * exp(-(1 - bq) * ba * ba / bn);
  return value.convert_to<double>();
}

CriterionResult check_exhaustive_oracle(std::uint64_t seed) {
  const char* title = "exhaustive oracle equals the aggregated kernel";
  double worst = 0.0;
  int states = 0;
  for (Count total : {2, 4, 6}) {
    for (Count z = 0; z <= total; ++z) {
      const LossPatternCounts counts = exhaustive_pattern_counts(OpinionVector::from_counts({z, total - z}));
      for (double q : {0.25, 0.5, 0.75}) {
        const CountDistribution brute = counts.distribution(q);
        const CountDistribution kernel = transition_row({z, total - z}, q);
        for (Count k = 0; k <= total; ++k) worst = std::max(worst, std::fabs(brute.at(k) - kernel.at(k)));
      }
      ++states;
    }
  }
  double worst_tv = 0.0;
  const std::uint64_t s = criterion_seed(seed, 1);
  for (Count z : {1, 2, 3}) {
    const OpinionCounts start{z, 4 - z};
    const std::vector<double> law = empirical_round_law(start, 0.5, 1000000, derive_seed(s, z), SimulationPath::per_agent);
    const CountDistribution brute = exhaustive_round_distribution(start, 0.5);
    double tv = 0.0;
    for (Count k = 0; k <= 4; ++k) tv += std::fabs(law[static_cast<std::size_t>(k)] - brute.at(k));
    worst_tv = std::max(worst_tv, 0.5 * tv);
  }
  const bool ok = worst <= 1e-12 && worst_tv <= 0.01;
  return result(1, title, ok,
                format("%d states x 3 q: max entry error %.3g (<= 1e-12); per-agent 2n=4, 1e6 rounds: max TV %.4f (<= 0.01)",
                       states, worst, worst_tv));
}

CriterionResult check_union_bound(std::uint64_t seed) {
  const char* title = "one round from n^{3/4} extra zeros never fails";
  const Estimate e = estimate_event_probability(config_of(10000, 1000, 0.5, 1), Event::majority_failure(), 100000,
                                                criterion_seed(seed, 2));
  const double bound = prop1_error_bound(10000, 1000, 0.5);
  const double small = prop1_error_bound(100, 50, 0.5);
  const double reference = prop1_error_bound_reference(100, 50, 0.5);
  const std::string shown = format("%.3e", small);
  const bool digits = shown == format("%.3e", reference) && shown == "1.291e-03";
  const bool ok = e.successes == 0 && digits;
  return result(2, title, ok,
                format("failures %lld/%lld, bound %.3g; bound(100,50,0.5) = %s, high-precision %.6e",
                       static_cast<long long>(e.successes), static_cast<long long>(e.trials), bound, shown.c_str(),
                       reference));
}

CriterionResult check_trichotomy() {
  const char* title = "exact one-round keep probability follows the trichotomy";
  const Count n = 10000;
  const double q = 0.5;
  const Count root = AsymmetryRegime::sqrt_scaled(1.0).asymmetry_at(n);
  const Count power = AsymmetryRegime::power(0.75).asymmetry_at(n);
  const double flat = keep_zero_probability(n, n, q);
  const double middle = keep_zero_probability(n + root, n - root, q);
  const double steep = keep_zero_probability(n + power, n - power, q);
  const double limit = trichotomy_middle_limit(1.0, q);
  const bool ok = flat > 0.5 && flat < 0.52 && std::fabs(middle - limit) <= 0.01 && steep >= 0.999;
  return result(3, title, ok,
                format("a=0: %.6f in (0.5,0.52); a=%lld: %.6f vs Phi(sqrt2)=%.5f (|diff| <= 0.01); a=%lld: %.12f (>= 0.999)",
                       flat, static_cast<long long>(root), middle, limit, static_cast<long long>(power), steep));
}

CriterionResult check_fluctuation_law(std::uint64_t seed) {
  const char* title = "symmetric-start fluctuation has variance near 1/2";
  const SymmetryBreakStatistics s = symmetry_break_statistics(10000, 0.5, 10000, criterion_seed(seed, 4));
  const bool ok = s.variance >= 0.45 && s.variance <= 0.55 && s.mean >= -0.03 && s.mean <= 0.03;
  return result(4, title, ok,
                format("n=1e4, q=0.5, 1e4 rounds: variance %.4f in [0.45,0.55], mean %+.4f in [-0.03,0.03]", s.variance,
                       s.mean));
}

CriterionResult check_three_round_consensus(std::uint64_t seed) {
  const char* title = "three rounds from a tie reach consensus";
  bool ok = true;
  std::string detail = "n=1e4, 1e3 trials, need >= 0.95:";
  for (double q : {0.2, 0.5, 0.8}) {
    const Estimate e = estimate_event_probability(config_of(10000, 0, q, 3), Event::consensus(), 1000,
                                                  derive_seed(criterion_seed(seed, 5), static_cast<std::uint64_t>(q * 10)));
    ok = ok && e.p_hat >= 0.95;
    detail += format(" q=%.1f %.3f [%.3f,%.3f]%s", q, e.p_hat, e.ci_low, e.ci_high, e.p_hat >= 0.95 ? "" : " (short)");
  }
  return result(5, title, ok, detail);
}

CriterionResult check_two_round_decay(std::uint64_t seed) {
  const VerificationReport r = verify_theorem2(Theorem2Check{}, criterion_seed(seed, 6));
  CriterionResult c = r.criteria.front();
  c.id = 6;
  return c;
}

CriterionResult check_deviation_tail(std::uint64_t seed) {
  const char* title = "one-round deviation tail stays under 2 exp(-B^2/n)";
  const Count n = 10000;
  const Count trials = 100000;
  const std::vector<Count> zeros = round_one_zero_counts(n, 0.5, trials, criterion_seed(seed, 7));
  bool ok = true;
  std::string detail = "n=1e4, q=0.5, 1e5 rounds:";
  for (Count b : {100, 200, 300}) {
    const auto hits = std::count_if(zeros.begin(), zeros.end(), [&](Count z) { return std::llabs(z - n) >= b; });
    const Estimate e = make_estimate(static_cast<Count>(hits), trials);
    const double bound = prop4_bound(n, b);
    ok = ok && e.p_hat <= bound + e.half_width();
    detail += format(" B=%lld %.5f <= %.5f", static_cast<long long>(b), e.p_hat, bound);
  }
  return result(7, title, ok, detail);
}

CriterionResult check_consensus_bound() {
  const char* title = "exact one-round consensus stays under the asymmetry bound";
  bool ok = true;
  int points = 0;
  double tightest = 0.0;
  int informative = 0;
  for (Count n : {10, 50, 100, 200}) {
    for (Count c : {0, 10, 50}) {
      if (c >= n) continue;
      const double exact = exact_chain_consensus_probability(n, c, 0.5, 1).p_consensus;
      const double bound = prop5_bound(n, c, 0.5);
      ok = ok && exact <= bound;
      tightest = std::max(tightest, exact / bound);
      if (bound < 1.0) ++informative;
      ++points;
    }
  }
  // At q=0.5 the constant f_q = 64 pushes the bound to 1 in double precision on this grid.
  return result(8, title, ok,
                format("%d points with 2n <= 400, q=0.5: max exact/bound %.9g (<= 1); bound below 1 at %d points",
                       points, tightest, informative));
}

CriterionResult check_analytic_invariants() {
  const char* title = "Pinsker, reverse Pinsker, Stirling brackets, p_n bracket";
  int violations = 0;
  for (int i = 1; i <= 99; ++i) {
    for (int j = 1; j <= 99; ++j) {
      const double a = i / 100.0;
      const double b = j / 100.0;
      const double d = kl_bernoulli(a, b);
      const double sq = (a - b) * (a - b);
      if (d < 2.0 * sq) ++violations;
      if (d > 2.0 / std::min(b, 1.0 - b) * sq * (1.0 + 1e-12) + 1e-300) ++violations;
    }
  }
  const int kl_violations = violations;
  for (Count m = 2; m <= 200; ++m) {
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      for (Count k = 1; k < m; ++k) {
        const ProbabilityBracket b = pmf_stirling_bounds(m, p, k);
        const double exact = binomial_log_pmf(m, p, k).probability();
        if (exact < b.lower || exact > b.upper) ++violations;
      }
    }
  }
  const int stirling_violations = violations - kl_violations;
  for (Count n = 1; n <= 500; ++n) {
    for (int i = 1; i <= 9; ++i) {
      const double q = i / 10.0;
      const double pn = keep_zero_probability(n, n, q);
      if (pn < 0.5) ++violations;
      if (n >= 2 && pn > pn_sandwich(n, q).upper) ++violations;
    }
  }
  const int pn_violations = violations - kl_violations - stirling_violations;
  return result(9, title, violations == 0,
                format("violations: divergence grid %d, Stirling grid %d, p_n grid %d", kl_violations,
                       stirling_violations, pn_violations));
}

CriterionResult check_return_rate(std::uint64_t seed) {
  const char* title = "return to the tied state decays like 1/sqrt(n)";
  const SweepResult s = return_to_symmetry_rate({100, 400, 1600}, 0.5, 1000000, criterion_seed(seed, 10));
  const auto rows = s.series("estimate");
  bool ok = true;
  std::string detail = "q=0.5, 1e6 rounds per n:";
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double ratio = rows[i]->value() / rows[i + 1]->value();
    ok = ok && ratio >= 1.6 && ratio <= 2.4;
    detail += format(" P(n=%lld)/P(n=%lld) = %.3f", static_cast<long long>(rows[i]->n),
                     static_cast<long long>(rows[i + 1]->n), ratio);
  }
  return result(10, title, ok, detail + " (in [1.6,2.4])");
}

CriterionResult check_determinism(const DeterminismProbe& probe) {
  const char* title = "repeated verify runs are byte-identical across worker counts";
  if (!probe) return result(11, title, false, "no determinism probe supplied");
  const std::string reference = probe(1);
  bool ok = !reference.empty();
  std::string detail = format("reference %zu bytes at 1 worker;", reference.size());
  for (int workers : {1, 2, 4}) {
    const bool same = probe(workers) == reference;
    ok = ok && same;
    detail += format(" %d workers %s", workers, same ? "identical" : "DIFFERENT");
  }
  return result(11, title, ok, detail);
}

CriterionResult run_criterion(int id, std::uint64_t seed, const DeterminismProbe& probe) {
  switch (id) {
    case 1: return check_exhaustive_oracle(seed);
    case 2: return check_union_bound(seed);
    case 3: return check_trichotomy();
    case 4: return check_fluctuation_law(seed);
    case 5: return check_three_round_consensus(seed);
    case 6: return check_two_round_decay(seed);
    case 7: return check_deviation_tail(seed);
    case 8: return check_consensus_bound();
    case 9: return check_analytic_invariants();
    case 10: return check_return_rate(seed);
    case 11: return check_determinism(probe);
    default: throw std::invalid_argument("criterion id must lie in 1..11");
  }
}

VerificationReport verify_theorem1(const Theorem1Check& check, std::uint64_t seed) {
  if (check.n_grid.empty()) throw std::invalid_argument("theorem1 check needs a nonempty n grid");
  VerificationReport report;
  report.suite = "theorem1";
  SweepResult sweep = theorem1_suite(check.q, check.n_grid, check.trials, seed, check.alpha);

  bool dominated = true;
  for (const SweepRow* row : sweep.series("smp1_power")) {
    dominated = dominated && row->estimate->p_hat <= row->bound->bound_value + row->estimate->half_width();
  }
  report.criteria.push_back(result(1, "one-round failure rate under the union bound", dominated,
                                   format("%zu rows, q=%.17g", sweep.series("smp1_power").size(), check.q)));

  const SweepRow* two = sweep.series("smp2_sqrt").back();
  report.criteria.push_back(result(2, "two rounds from alpha sqrt(n) reach majority consensus",
                                   two->estimate->p_hat >= 0.9,
                                   format("n=%lld: %.4f (>= 0.9)", static_cast<long long>(two->n), two->estimate->p_hat)));

  const SweepRow* three = sweep.series("smp3_symmetric").back();
  report.criteria.push_back(result(3, "three rounds from a tie reach consensus", three->estimate->p_hat >= 0.95,
                                   format("n=%lld: %.4f (>= 0.95)", static_cast<long long>(three->n),
                                          three->estimate->p_hat)));
  report.sweeps.push_back(std::move(sweep));
  return report;
}

VerificationReport verify_theorem2(const Theorem2Check& check, std::uint64_t seed) {
  if (!(2 * check.chain_n <= kExactChainMaxAgents)) throw std::invalid_argument("chain check size exceeds the exact-chain limit");
  VerificationReport report;
  report.suite = "theorem2";
  SweepResult sweep = theorem2_suite(check.q, check.n_grid, check.trials, seed);

  const auto rows = sweep.series("smp2_symmetric");
  bool monotone = true;
  std::string detail = "estimates:";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail += format(" n=%lld %.4f", static_cast<long long>(rows[i]->n), rows[i]->estimate->p_hat);
    if (i == 0) continue;
    const Estimate& prev = *rows[i - 1]->estimate;
    const Estimate& cur = *rows[i]->estimate;
    monotone = monotone && (cur.p_hat <= prev.p_hat || cur.ci_low <= prev.ci_high);
  }

  SweepRow probe;
  probe.series = "chain_check";
  probe.n = check.chain_n;
  probe.q = check.q;
  probe.rounds = 2;
  probe.event = "consensus";
  probe.estimate = estimate_event_probability(config_of(check.chain_n, 0, check.q, 2), Event::consensus(),
                                              check.trials, derive_seed(seed, 0x200));
  probe.exact = exact_chain_consensus_probability(check.chain_n, 0, check.q, 2).p_consensus;
  const bool covered = probe.estimate->contains(*probe.exact);
  detail += format("; n=%lld exact %.5f in [%.5f,%.5f]", static_cast<long long>(check.chain_n), *probe.exact,
                   probe.estimate->ci_low, probe.estimate->ci_high);
  sweep.rows.push_back(std::move(probe));

  report.criteria.push_back(result(1, "two rounds from a tie: consensus rate decays with n", monotone && covered, detail));
  report.sweeps.push_back(std::move(sweep));
  return report;
}

std::vector<int> property_criteria() { return {1, 3, 4, 7, 8, 9, 10}; }

VerificationReport verify_criteria(const std::string& suite, const std::vector<int>& ids, std::uint64_t seed,
                                   const DeterminismProbe& probe) {
  VerificationReport report;
  report.suite = suite;
  for (int id : ids) report.criteria.push_back(run_criterion(id, seed, probe));
  return report;
}

}  // namespace smp

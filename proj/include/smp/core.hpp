#pragma once

// Domain types for the simple majority protocol over 2n fully-connected
// agents with i.i.d. message loss.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace smp {

using Count = std::int64_t;

enum class Opinion : std::uint8_t { zero = 0, one = 1 };

constexpr Opinion flip(Opinion a) noexcept {
  return a == Opinion::zero ? Opinion::one : Opinion::zero;
}

/// Aggregate system state. On the complete graph with i.i.d. losses the
/// law of a run depends on the state only through these two counts.
struct OpinionCounts {
  Count zeros = 0;
  Count ones = 0;

  constexpr Count total() const noexcept { return zeros + ones; }
  constexpr Count of(Opinion a) const noexcept {
    return a == Opinion::zero ? zeros : ones;
  }
  constexpr OpinionCounts relabeled() const noexcept { return {ones, zeros}; }

  friend constexpr bool operator==(const OpinionCounts&, const OpinionCounts&) = default;
};

/// Throws std::invalid_argument unless both counts are nonnegative and the
/// total is even and at least 2.
void require_valid(const OpinionCounts& counts);

/// Explicit per-agent state. Only used by the exhaustive oracle, the
/// per-agent reference path and I/O.
class OpinionVector {
 public:
  explicit OpinionVector(std::vector<Opinion> bits);

  /// Zeros first, then ones.
  static OpinionVector from_counts(const OpinionCounts& counts);

  std::size_t size() const noexcept { return bits_.size(); }
  Opinion operator[](std::size_t i) const { return bits_[i]; }
  std::span<const Opinion> bits() const noexcept { return bits_; }
  OpinionCounts counts() const;

  friend bool operator==(const OpinionVector&, const OpinionVector&) = default;

 private:
  std::vector<Opinion> bits_;
};

class NetworkModel {
 public:
  explicit NetworkModel(double q);

  double q() const noexcept { return q_; }
  double q_prime() const noexcept { return 1.0 - q_; }
  bool degenerate() const noexcept { return q_ == 0.0 || q_ == 1.0; }

 private:
  double q_;
};

struct ProtocolConfig {
  Count n = 1;
  Count delta = 0;
  int rounds = 1;
  NetworkModel network{0.5};

  OpinionCounts initial_state() const;
  void validate() const;
};

/// Family of asymmetry sequences a_n used by the trichotomy sweeps.
class AsymmetryRegime {
 public:
  enum class Kind { zero, logarithmic, sqrt_scaled, power, custom };

  static AsymmetryRegime zero();
  static AsymmetryRegime logarithmic();
  static AsymmetryRegime sqrt_scaled(double alpha);
  static AsymmetryRegime power(double beta);
  static AsymmetryRegime custom(std::map<Count, Count> table);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return parameter_; }

  /// Integer asymmetry at n. Real-valued sequences are rounded up.
  Count asymmetry_at(Count n) const;

  /// Limit of the one-round keep probability predicted for this regime,
  /// if the regime has one.
  std::optional<double> predicted_limit(double q) const;

  std::string label() const;

 private:
  AsymmetryRegime(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}

  Kind kind_;
  double parameter_ = 0.0;
  std::map<Count, Count> table_;
};

/// One agent's update. Own opinion is already included in its own count.
Opinion majority_update(Opinion own, Count n0, Count n1);

Count count_opinions(std::span<const Opinion> v, Opinion a) noexcept;

bool is_consensus(const OpinionCounts& counts) noexcept;

bool is_majority_consensus(const OpinionCounts& initial, const OpinionCounts& final_state);

OpinionCounts make_initial_state(Count n, Count delta);

}  // namespace smp

#include "smp/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smp/special.hpp"

namespace smp {

void require_valid(const OpinionCounts& counts) {
  if (counts.zeros < 0 || counts.ones < 0) {
    throw std::invalid_argument("opinion counts must be nonnegative");
  }
  if (counts.total() < 2 || counts.total() % 2 != 0) {
    throw std::invalid_argument("agent count must be even and at least 2, got " +
                                std::to_string(counts.total()));
  }
}

OpinionVector::OpinionVector(std::vector<Opinion> bits) : bits_(std::move(bits)) {
  if (bits_.size() < 2 || bits_.size() % 2 != 0) {
    throw std::invalid_argument("opinion vector length must be even and at least 2");
  }
}

OpinionVector OpinionVector::from_counts(const OpinionCounts& counts) {
  require_valid(counts);
  std::vector<Opinion> bits(static_cast<std::size_t>(counts.total()), Opinion::one);
  std::fill_n(bits.begin(), counts.zeros, Opinion::zero);
  return OpinionVector(std::move(bits));
}

OpinionCounts OpinionVector::counts() const {
  return {count_opinions(bits_, Opinion::zero), count_opinions(bits_, Opinion::one)};
}

NetworkModel::NetworkModel(double q) : q_(q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("loss parameter q must lie in [0,1]");
  }
}

OpinionCounts ProtocolConfig::initial_state() const { return make_initial_state(n, delta); }

void ProtocolConfig::validate() const {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (delta > n || delta < -n) throw std::invalid_argument("|delta| must not exceed n");
  if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
}

AsymmetryRegime AsymmetryRegime::zero() { return {Kind::zero, 0.0}; }

AsymmetryRegime AsymmetryRegime::logarithmic() { return {Kind::logarithmic, 0.0}; }

AsymmetryRegime AsymmetryRegime::sqrt_scaled(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("sqrt_scaled regime requires alpha > 0");
  return {Kind::sqrt_scaled, alpha};
}

AsymmetryRegime AsymmetryRegime::power(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("power regime requires beta in (0,1)");
  }
  return {Kind::power, beta};
}

AsymmetryRegime AsymmetryRegime::custom(std::map<Count, Count> table) {
  AsymmetryRegime r{Kind::custom, 0.0};
  r.table_ = std::move(table);
  return r;
}

Count AsymmetryRegime::asymmetry_at(Count n) const {
  const auto dn = static_cast<double>(n);
  switch (kind_) {
    case Kind::zero:
      return 0;
    case Kind::logarithmic:
      return static_cast<Count>(std::ceil(std::log(dn)));
    case Kind::sqrt_scaled:
      return static_cast<Count>(std::ceil(parameter_ * std::sqrt(dn)));
    case Kind::power:
      // Exact powers such as 10000^(3/4) must not round up past the integer.
      return static_cast<Count>(std::ceil(std::pow(dn, parameter_) - 1e-9));
    case Kind::custom: {
      auto it = table_.find(n);
      if (it == table_.end()) {
        throw std::invalid_argument("custom regime has no entry for n=" + std::to_string(n));
      }
      return it->second;
    }
  }
  return 0;
}

std::optional<double> AsymmetryRegime::predicted_limit(double q) const {
  switch (kind_) {
    case Kind::zero:
    case Kind::logarithmic:
      return 0.5;
    case Kind::sqrt_scaled:
      return trichotomy_middle_limit(parameter_, q);
    case Kind::power:
      return 1.0;
    case Kind::custom:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string AsymmetryRegime::label() const {
  switch (kind_) {
    case Kind::zero:
      return "zero";
    case Kind::logarithmic:
      return "logarithmic";
    case Kind::sqrt_scaled:
      return "sqrt_scaled(alpha=" + std::to_string(parameter_) + ")";
    case Kind::power:
      return "power(beta=" + std::to_string(parameter_) + ")";
    case Kind::custom:
      return "custom";
  }
  return "unknown";
}

Opinion majority_update(Opinion own, Count n0, Count n1) {
  if (n0 < 0 || n1 < 0) throw std::invalid_argument("enumerators must be nonnegative");
  if ((own == Opinion::zero && n0 < 1) || (own == Opinion::one && n1 < 1)) {
    throw std::invalid_argument("own opinion must be included in its own enumerator");
  }
  if (n0 > n1) return Opinion::zero;
  if (n1 > n0) return Opinion::one;
  return own;
}

Count count_opinions(std::span<const Opinion> v, Opinion a) noexcept {
  return static_cast<Count>(std::count(v.begin(), v.end(), a));
}

bool is_consensus(const OpinionCounts& counts) noexcept {
  return counts.zeros == 0 || counts.ones == 0;
}

bool is_majority_consensus(const OpinionCounts& initial, const OpinionCounts& final_state) {
  if (initial.total() != final_state.total()) {
    throw std::invalid_argument("initial and final states have different agent counts");
  }
  if (initial.zeros > initial.ones) return final_state.ones == 0;
  if (initial.ones > initial.zeros) return final_state.zeros == 0;
  return is_consensus(final_state);
}

OpinionCounts make_initial_state(Count n, Count delta) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (delta > n || delta < -n) {
    throw std::invalid_argument("|delta| must not exceed n");
  }
  return {n + delta, n - delta};
}

}  // namespace smp

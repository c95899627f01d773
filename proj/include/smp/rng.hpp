#pragma once

// Counter-based random streams. Every draw is a pure function of
// (master seed, path, draw index), so results do not depend on how trials
// are scheduled across threads.

#include <array>
#include <cstdint>

namespace smp {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key) noexcept;
};

/// 64-bit finalizer (splitmix64); used to derive child seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for a labelled sub-experiment of a run.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t label) noexcept;

/// Path labels identifying a stream within a run.
struct StreamPath {
  std::uint32_t trial = 0;
  std::uint32_t round = 0;
  std::uint32_t group = 0;
};

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, StreamPath path) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  std::uint64_t master_seed() const noexcept { return seed_; }
  const StreamPath& path() const noexcept { return path_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  StreamPath path_;
  std::uint32_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
};

/// The per-round stream factory handed to step functions.
struct RoundStreams {
  std::uint64_t master_seed = 0;
  std::uint32_t trial = 0;
  std::uint32_t round = 0;

  RngStream stream(std::uint32_t group) const noexcept {
    return RngStream(master_seed, {trial, round, group});
  }
};

}  // namespace smp

#include "smp/transition.hpp"

#include <array>
#include <atomic>
#include <bit>
#include <cstdint>
#include <list>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "smp/binomial.hpp"

namespace smp {

namespace {

struct CacheKey {
  Count z;
  Count o;
  std::uint64_t q_bits;

  friend bool operator==(const CacheKey&, const CacheKey&) = default;
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const noexcept {
    std::uint64_t h = k.q_bits * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(k.z) + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.o) + 0x8CB92BA72F3D8DD7ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

// Sharded LRU; each shard is guarded by its own mutex.
class TransitionCache {
 public:
  static constexpr std::size_t kShards = 64;

  explicit TransitionCache(std::size_t capacity) { set_capacity(capacity); }

  void set_capacity(std::size_t capacity) {
    for (auto& shard : shards_) {
      std::lock_guard lock(shard.mutex);
      shard.order.clear();
      shard.index.clear();
    }
    capacity_.store(capacity);
  }

  std::size_t capacity() const { return capacity_.load(); }

  std::size_t size() {
    std::size_t total = 0;
    for (auto& shard : shards_) {
      std::lock_guard lock(shard.mutex);
      total += shard.index.size();
    }
    return total;
  }

  template <class Compute>
  TransitionProbabilities get_or_compute(const CacheKey& key, Compute&& compute) {
    const std::size_t cap = capacity_.load();
    if (cap == 0) return compute();
    const std::size_t per_shard = std::max<std::size_t>(1, cap / kShards);
    Shard& shard = shards_[CacheKeyHash{}(key) % kShards];
    {
      std::lock_guard lock(shard.mutex);
      auto it = shard.index.find(key);
      if (it != shard.index.end()) {
        shard.order.splice(shard.order.begin(), shard.order, it->second);
        return it->second->second;
      }
    }
    // Computed outside the lock; two threads racing on one key produce the
    // same value, so whichever insert lands first is kept.
    const TransitionProbabilities value = compute();
    std::lock_guard lock(shard.mutex);
    if (shard.index.find(key) == shard.index.end()) {
      shard.order.emplace_front(key, value);
      shard.index.emplace(key, shard.order.begin());
      while (shard.index.size() > per_shard) {
        shard.index.erase(shard.order.back().first);
        shard.order.pop_back();
      }
    }
    return value;
  }

 private:
  using Entry = std::pair<CacheKey, TransitionProbabilities>;
  struct Shard {
    std::mutex mutex;
    std::list<Entry> order;
    std::unordered_map<CacheKey, std::list<Entry>::iterator, CacheKeyHash> index;
  };

  std::array<Shard, kShards> shards_;
  std::atomic<std::size_t> capacity_{0};
};

TransitionCache& cache() {
  static TransitionCache instance(std::size_t{1} << 20);
  return instance;
}

void check_q(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("loss parameter q must lie in [0,1]");
}

}  // namespace

double keep_zero_probability(Count z, Count o, double q) {
  check_q(q);
  if (z < 1) throw std::invalid_argument("keep_zero_probability requires z >= 1");
  if (o < 0) throw std::invalid_argument("counts must be nonnegative");
  return comparison_probability(z - 1, o, 1.0 - q, 1);
}

double adopt_zero_probability(Count z, Count o, double q) {
  check_q(q);
  if (o < 1) throw std::invalid_argument("adopt_zero_probability requires o >= 1");
  if (z < 0) throw std::invalid_argument("counts must be nonnegative");
  return comparison_probability(z, o - 1, 1.0 - q, -2);
}

TransitionProbabilities transition_probabilities(Count z, Count o, double q) {
  check_q(q);
  if (z < 0 || o < 0) throw std::invalid_argument("counts must be nonnegative");
  const CacheKey key{z, o, std::bit_cast<std::uint64_t>(q)};
  return cache().get_or_compute(key, [&] {
    TransitionProbabilities t;
    if (z > 0) t.p_keep_zero = keep_zero_probability(z, o, q);
    if (o > 0) t.p_adopt_zero = adopt_zero_probability(z, o, q);
    return t;
  });
}

void set_transition_cache_capacity(std::size_t entries) { cache().set_capacity(entries); }

std::size_t transition_cache_capacity() { return cache().capacity(); }

std::size_t transition_cache_size() { return cache().size(); }

void clear_transition_cache() { cache().set_capacity(cache().capacity()); }

}  // namespace smp

#pragma once

// Worker-count control for the OpenMP kernels.

#include <optional>
#include <string>

namespace smp {

inline constexpr const char* kWorkersEnv = "SMP_WORKERS";

/// Explicit request wins, then SMP_WORKERS, then the OpenMP default.
/// Throws std::invalid_argument on a nonpositive or malformed count.
int resolve_workers(std::optional<int> requested);

void set_workers(int workers);
int current_workers();

/// Sets the worker count for its lifetime and restores the previous one.
class WorkerScope {
 public:
  explicit WorkerScope(int workers);
  ~WorkerScope();
  WorkerScope(const WorkerScope&) = delete;
  WorkerScope& operator=(const WorkerScope&) = delete;

 private:
  int previous_;
};

}  // namespace smp

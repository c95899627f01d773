#include "smp/parallel.hpp"

#include <cstdlib>
#include <stdexcept>

#include <omp.h>

namespace smp {

namespace {

int parse_workers(const std::string& text) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed worker count '" + text + "'");
  }
  if (used != text.size() || value < 1) {
    throw std::invalid_argument("worker count must be a positive integer, got '" + text + "'");
  }
  return value;
}

}  // namespace

int resolve_workers(std::optional<int> requested) {
  if (requested) {
    if (*requested < 1) throw std::invalid_argument("worker count must be positive");
    return *requested;
  }
  if (const char* env = std::getenv(kWorkersEnv); env != nullptr && *env != '\0') {
    return parse_workers(env);
  }
  return omp_get_max_threads();
}

void set_workers(int workers) {
  if (workers < 1) throw std::invalid_argument("worker count must be positive");
  omp_set_num_threads(workers);
}

int current_workers() { return omp_get_max_threads(); }

WorkerScope::WorkerScope(int workers) : previous_(current_workers()) { set_workers(workers); }

WorkerScope::~WorkerScope() { omp_set_num_threads(previous_); }

}  // namespace smp

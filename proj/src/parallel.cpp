#include "tpqrm/parallel.hpp"

#include <omp.h>

namespace tpqrm {

int resolve_workers(const ExecutionPolicy& exec) {
  if (exec.workers > 0) return exec.workers;
  return omp_get_max_threads();
}

namespace detail {

void run_parallel(std::size_t n, int workers, void (*trampoline)(void*, std::size_t), void* ctx,
                  std::vector<std::exception_ptr>& errors) {
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long long i = 0; i < count; ++i) {
    try {
      trampoline(ctx, static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
}

}  // namespace detail

}  // namespace tpqrm

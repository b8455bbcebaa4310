#pragma once

// Scan-point parallelism. Every grid point is an independent task that writes
// only its own result slot, so output order never depends on scheduling.

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

namespace tpqrm {

struct ExecutionPolicy {
  /// Worker threads; 0 means all available cores, 1 runs the serial path.
  int workers = 0;
};

int resolve_workers(const ExecutionPolicy& exec);

/// Serial reference loop.
template <class F>
void for_each_point_serial(std::size_t n, F&& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

namespace detail {
void run_parallel(std::size_t n, int workers, void (*trampoline)(void*, std::size_t), void* ctx,
                  std::vector<std::exception_ptr>& errors);
}

/// OpenMP loop over points; the first exception (by point index) is rethrown.
template <class F>
void for_each_point(std::size_t n, const ExecutionPolicy& exec, F&& body) {
  const int workers = resolve_workers(exec);
  if (workers <= 1 || n < 2) {
    for_each_point_serial(n, body);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  auto trampoline = [](void* ctx, std::size_t i) { (*static_cast<std::remove_reference_t<F>*>(ctx))(i); };
  detail::run_parallel(n, workers, trampoline, &body, errors);
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace tpqrm

#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <type_traits>
#include <vector>

namespace randset {

enum class Execution { Serial, OpenMP };

// Applies RANDSET_THREADS (if set and positive) as the OpenMP worker cap.
void configure_threads_from_env();
int worker_count();

namespace detail {
void parallel_for_indices(std::size_t n, void (*body)(std::size_t, void*), void* ctx);
}

// Evaluates fn(i) for i in [0, n) and returns the results in index order.
// Each replicate must derive its own RngStream from i; no state is shared,
// so Serial and OpenMP produce identical vectors.
template <class Fn>
auto map_replicates(std::size_t n, Fn&& fn, Execution exec = Execution::OpenMP)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using T = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<T> out(n);
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }

  struct Ctx {
    std::remove_reference_t<Fn>* fn;
    std::vector<T>* out;
    std::exception_ptr error;
    std::mutex lock;
  } ctx{&fn, &out, nullptr, {}};

  detail::parallel_for_indices(
      n,
      [](std::size_t i, void* raw) {
        auto& c = *static_cast<Ctx*>(raw);
        try {
          (*c.out)[i] = (*c.fn)(i);
        } catch (...) {
          std::lock_guard<std::mutex> guard(c.lock);
          if (!c.error) c.error = std::current_exception();
        }
      },
      &ctx);
  if (ctx.error) std::rethrow_exception(ctx.error);
  return out;
}

}  // namespace randset

#include "birkhoff/parallel.hpp"

#include "birkhoff/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace birkhoff {

namespace {
std::atomic<unsigned> g_threads{1};
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::NotTrapping: return "not_trapping";
    case ErrorKind::NoSeparation: return "no_separation";
    case ErrorKind::NotHyperbolic: return "not_hyperbolic";
    case ErrorKind::CurveComplexityOverflow: return "curve_complexity_overflow";
    case ErrorKind::NotExact: return "not_exact";
    case ErrorKind::MissingPrimitiveStep: return "missing_primitive_step";
    case ErrorKind::WindowOverflow: return "window_overflow";
    case ErrorKind::EssentialClassNotFound: return "essential_class_not_found";
    case ErrorKind::BackendLimit: return "backend_limit";
    case ErrorKind::NonSeparatingInput: return "non_separating_input";
    case ErrorKind::TwistRequired: return "twist_required";
    case ErrorKind::EmptySet: return "empty_set";
    case ErrorKind::GridMismatch: return "grid_mismatch";
    case ErrorKind::Schema: return "schema";
  }
  return "unknown";
}

void set_thread_count(unsigned n) {
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  g_threads.store(n);
}

unsigned thread_count() { return g_threads.load(); }

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body) {
  if (end <= begin) return;
  const std::size_t n = end - begin;
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1 || n < 64) {
    for (std::size_t i = begin; i < end; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = begin + w * chunk;
    const std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace birkhoff

#include "qha/common.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace qha {

Executor::Executor(unsigned workers) : workers_(std::max(1u, workers)) {}

void Executor::for_each(std::size_t count, const std::function<void(std::size_t)>& fn) const {
  if (workers_ == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t nthreads = std::min<std::size_t>(workers_, count);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  std::vector<std::exception_ptr> errors(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += nthreads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {
Executor& mutable_default() {
  static Executor executor{1};
  return executor;
}
}  // namespace

const Executor& default_executor() { return mutable_default(); }

void set_default_workers(unsigned workers) { mutable_default() = Executor{workers}; }

}  // namespace qha

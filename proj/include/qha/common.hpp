#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qha {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Thrown for violated preconditions (bad grids, mismatched operands, ...).
class QhaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parallel-map capability handed to the numerical modules.
///
/// Work items write into their own output slot; any reduction over the slots
/// is done afterwards by the caller in index order, so results do not depend
/// on the worker count.
class Executor {
public:
  explicit Executor(unsigned workers = 1);

  unsigned workers() const { return workers_; }

  void for_each(std::size_t count, const std::function<void(std::size_t)>& fn) const;

private:
  unsigned workers_;
};

/// Executor used by the library when the caller does not pass one.
const Executor& default_executor();
void set_default_workers(unsigned workers);

/// Integer power n^k for small grid bookkeeping.
inline std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

/// Row-major decomposition of a flat index into `rank` digits base n.
inline void unravel(std::size_t flat, std::size_t rank, std::size_t n, std::size_t* digits) {
  for (std::size_t a = rank; a-- > 0;) {
    digits[a] = flat % n;
    flat /= n;
  }
}

inline std::size_t ravel(const std::size_t* digits, std::size_t rank, std::size_t n) {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < rank; ++a) flat = flat * n + digits[a];
  return flat;
}

/// FFT-order index m in [0, n) -> signed frequency index in [-n/2, n/2).
inline long centered_frequency(std::size_t m, std::size_t n) {
  return m < n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
}

inline std::size_t wrap_index(long k, std::size_t n) {
  const long nn = static_cast<long>(n);
  return static_cast<std::size_t>(((k % nn) + nn) % nn);
}

}  // namespace qha

#include "qha/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace qha::fft {
namespace {

struct AlignedBuffer {
  explicit AlignedBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(n, 1)))) {
    if (!ptr) throw std::bad_alloc();
  }
  ~AlignedBuffer() { fftw_free(ptr); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  fftw_complex* ptr;
};

// Planning is not thread-safe in FFTW; execution of an existing plan on new
// arrays is. Plans are created once per (shape, direction) under a lock.
class PlanCache {
public:
  fftw_plan get(const std::vector<int>& dims, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(dims, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    AlignedBuffer scratch(total);
    fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), scratch.ptr, scratch.ptr,
                                   sign, FFTW_ESTIMATE);
    if (!plan) throw QhaError("fftw: plan creation failed");
    plans_.emplace(std::move(key), plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

private:
  std::mutex mutex_;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void transform(std::span<Complex> data, std::span<const std::size_t> shape, Direction dir) {
  std::vector<int> dims(shape.begin(), shape.end());
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  if (total != data.size()) throw QhaError("fft: shape does not match data size");
  if (dims.empty() || total == 0) return;
  const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan = cache().get(dims, sign);
  AlignedBuffer buf(total);
  std::copy(data.begin(), data.end(), reinterpret_cast<Complex*>(buf.ptr));
  fftw_execute_dft(plan, buf.ptr, buf.ptr);
  std::copy_n(reinterpret_cast<Complex*>(buf.ptr), total, data.begin());
}

void transform_cube(std::span<Complex> data, std::size_t rank, std::size_t n, Direction dir) {
  std::vector<std::size_t> shape(rank, n);
  transform(data, shape, dir);
}

void centered_transform_cube(std::span<Complex> data, std::size_t rank, std::size_t n, Direction dir) {
  // Per axis e^{∓2πi(p−n/2)(k−n/2)/n} = e^{∓2πi pk/n} (−1)^{p+k} (−1)^{n/2}.
  std::vector<std::size_t> digits(rank);
  auto parity = [&](std::size_t flat) {
    unravel(flat, rank, n, digits.data());
    std::size_t s = 0;
    for (auto d : digits) s += d;
    return s % 2 == 0 ? 1.0 : -1.0;
  };
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= parity(i);
  transform_cube(data, rank, n, dir);
  const double global = (rank * (n / 2)) % 2 == 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= parity(i) * global;
}

}  // namespace qha::fft

#pragma once

#include <compare>
#include <cstddef>
#include <vector>

namespace qha {

/// α ∈ ℕ₀^{2d}; entries [0, d) are position directions, [d, 2d) momentum directions.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t axes) : entries_(axes, 0) {}
  MultiIndex(std::initializer_list<unsigned> entries) : entries_(entries) {}
  explicit MultiIndex(std::vector<unsigned> entries) : entries_(std::move(entries)) {}

  static MultiIndex unit(std::size_t axes, std::size_t j) {
    MultiIndex m(axes);
    m.entries_.at(j) = 1;
    return m;
  }

  std::size_t axes() const { return entries_.size(); }
  unsigned operator[](std::size_t j) const { return entries_[j]; }
  unsigned& operator[](std::size_t j) { return entries_[j]; }
  const std::vector<unsigned>& entries() const { return entries_; }

  unsigned order() const {
    unsigned s = 0;
    for (auto e : entries_) s += e;
    return s;
  }

  double factorial() const {
    double f = 1.0;
    for (auto e : entries_)
      for (unsigned k = 2; k <= e; ++k) f *= k;
    return f;
  }

  /// ∏ v_j^{α_j}
  double monomial(const std::vector<double>& v) const {
    double r = 1.0;
    for (std::size_t j = 0; j < entries_.size(); ++j)
      for (unsigned k = 0; k < entries_[j]; ++k) r *= v[j];
    return r;
  }

  /// Componentwise α ≤ β.
  bool leq(const MultiIndex& other) const {
    for (std::size_t j = 0; j < entries_.size(); ++j)
      if (entries_[j] > other.entries_[j]) return false;
    return true;
  }

  MultiIndex operator+(const MultiIndex& o) const {
    MultiIndex r = *this;
    for (std::size_t j = 0; j < entries_.size(); ++j) r.entries_[j] += o.entries_[j];
    return r;
  }
  MultiIndex operator-(const MultiIndex& o) const {
    MultiIndex r = *this;
    for (std::size_t j = 0; j < entries_.size(); ++j) r.entries_[j] -= o.entries_[j];
    return r;
  }

  auto operator<=>(const MultiIndex&) const = default;

private:
  std::vector<unsigned> entries_;
};

/// All α with |α| ≤ max_order, sorted by total order then lexicographically.
std::vector<MultiIndex> multi_indices_up_to(std::size_t axes, unsigned max_order);

/// All α with |α| == order.
std::vector<MultiIndex> multi_indices_of_order(std::size_t axes, unsigned order);

/// ∏ binom(β_j, α_j)
double binomial(const MultiIndex& beta, const MultiIndex& alpha);

}  // namespace qha

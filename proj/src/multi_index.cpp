#include "qha/multi_index.hpp"

namespace qha {
namespace {

void fill(std::size_t axes, unsigned remaining, std::size_t pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos + 1 == axes) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (unsigned k = remaining + 1; k-- > 0;) {
    cur[pos] = k;
    fill(axes, remaining - k, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_order(std::size_t axes, unsigned order) {
  std::vector<MultiIndex> out;
  if (axes == 0) return out;
  MultiIndex cur(axes);
  fill(axes, order, 0, cur, out);
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(std::size_t axes, unsigned max_order) {
  std::vector<MultiIndex> out;
  for (unsigned k = 0; k <= max_order; ++k) {
    auto level = multi_indices_of_order(axes, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

double binomial(const MultiIndex& beta, const MultiIndex& alpha) {
  double r = 1.0;
  for (std::size_t j = 0; j < beta.axes(); ++j) {
    const unsigned n = beta[j], k = alpha[j];
    if (k > n) return 0.0;
    double c = 1.0;
    for (unsigned i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    r *= c;
  }
  return r;
}

}  // namespace qha

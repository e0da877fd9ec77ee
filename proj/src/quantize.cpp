#include "qha/quantize.hpp"

namespace qha {

OperatorRep op_tau(const Symbol& f, double tau) { return fourier_weyl_inverse(fourier_sigma(f), tau); }

OperatorRep op_weyl(const Symbol& f) { return op_tau(f, 0.5); }

Symbol symbol_of(const OperatorRep& a, double tau) { return fourier_sigma(fourier_weyl(a, tau)); }

Symbol n_tau(const Symbol& f, double tau) {
  if (tau == 0.0) return f;
  // F_W^τ = e^{iτ y·η} F_W^0 on the lattice.
  const PhaseGrid& g = f.grid();
  const std::size_t d = g.d(), n = g.n(), rank = g.axes();
  Symbol s = fourier_sigma(f);
  std::vector<std::size_t> dig(rank);
  for (std::size_t flat = 0; flat < s.size(); ++flat) {
    unravel(flat, rank, n, dig.data());
    double yeta = 0.0;
    for (std::size_t a = 0; a < d; ++a)
      yeta += static_cast<double>(g.centered(dig[a])) * static_cast<double>(g.centered(dig[d + a]));
    s[flat] *= std::polar(1.0, tau * 2.0 * kPi * yeta / static_cast<double>(n));
  }
  return fourier_sigma(s);
}

}  // namespace qha

#include "qha/fourier.hpp"

#include <cmath>

#include "qha/fft.hpp"

namespace qha {

NormalizationProfile normalization(std::size_t d) {
  const double c = std::pow(2.0 * kPi, -static_cast<double>(d));
  return {c, c};
}

NormalizationProfile calibrate_normalization(const PhaseGrid& grid) {
  const OperatorRep p0 = gaussian_projector(grid);
  const Symbol f = fourier_weyl(p0);
  double s = 0.0;
  for (const auto& v : f.values()) s += std::norm(v);
  const double hs2 = p0.hs_norm() * p0.hs_norm();
  NormalizationProfile prof{normalization(grid.d()).fsigma_prefactor, hs2 / (s * grid.cell_volume())};
  const double expected = normalization(grid.d()).fw_measure_prefactor;
  if (std::abs(prof.fw_measure_prefactor - expected) > 1e-12 * expected)
    throw QhaError("calibrate_normalization: measured c_W deviates from (2π)^{-d}");
  return prof;
}

Symbol fourier_sigma(const Symbol& f) {
  const PhaseGrid& g = f.grid();
  const std::size_t d = g.d(), n = g.n(), rank = g.axes();
  ComplexVector c = f.values();
  fft::centered_transform_cube(c, rank, n, fft::Direction::forward);
  const double scale = 1.0 / static_cast<double>(g.position_size());
  Symbol out(g);
  std::vector<std::size_t> dig(rank), src(rank);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    unravel(flat, rank, n, dig.data());
    for (std::size_t a = 0; a < d; ++a) {
      src[a] = dig[d + a];
      src[d + a] = (n - dig[a]) % n;
    }
    out[flat] = c[ravel(src.data(), rank, n)] * scale;
  }
  return out;
}

namespace {

double lattice_product(const PhaseGrid& g, std::size_t a_flat, std::size_t b_flat) {
  const std::size_t d = g.d(), n = g.n();
  std::vector<std::size_t> da(d), db(d);
  unravel(a_flat, d, n, da.data());
  unravel(b_flat, d, n, db.data());
  double s = 0.0;
  for (std::size_t ax = 0; ax < d; ++ax)
    s += static_cast<double>(g.centered(da[ax])) * static_cast<double>(g.centered(db[ax]));
  return 2.0 * kPi * s / static_cast<double>(n);  // y·η
}

// Column index k − a (per axis, cyclic) for position index k and centered shift of a.
std::vector<std::size_t> diagonal_columns(const PhaseGrid& g, std::size_t a_flat) {
  const std::size_t d = g.d(), n = g.n(), m = g.position_size();
  std::vector<std::size_t> da(d), dk(d), cols(m);
  unravel(a_flat, d, n, da.data());
  for (std::size_t k = 0; k < m; ++k) {
    unravel(k, d, n, dk.data());
    for (std::size_t ax = 0; ax < d; ++ax)
      dk[ax] = wrap_index(static_cast<long>(dk[ax]) - g.centered(da[ax]), n);
    cols[k] = ravel(dk.data(), d, n);
  }
  return cols;
}

}  // namespace

Symbol fourier_weyl(const OperatorRep& a, double tau, const Executor& exec) {
  const PhaseGrid& g = a.grid();
  const std::size_t m = g.position_size();
  Symbol out(g);
  exec.for_each(m, [&](std::size_t af) {
    const auto cols = diagonal_columns(g, af);
    ComplexVector u(m);
    for (std::size_t k = 0; k < m; ++k)
      u[k] = a.matrix()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(cols[k]));
    fft::centered_transform_cube(u, g.d(), g.n(), fft::Direction::forward);
    for (std::size_t bf = 0; bf < m; ++bf) out[af * m + bf] = u[bf] * std::polar(1.0, tau * lattice_product(g, af, bf));
  });
  return out;
}

OperatorRep fourier_weyl_inverse(const Symbol& f, double tau, const Executor& exec) {
  const PhaseGrid& g = f.grid();
  const std::size_t m = g.position_size();
  const double scale = 1.0 / static_cast<double>(m);  // c_W · cell
  OperatorRep out(g);
  exec.for_each(m, [&](std::size_t af) {
    ComplexVector v(m);
    for (std::size_t bf = 0; bf < m; ++bf) v[bf] = f[af * m + bf] * std::polar(1.0, -tau * lattice_product(g, af, bf));
    fft::centered_transform_cube(v, g.d(), g.n(), fft::Direction::backward);
    const auto cols = diagonal_columns(g, af);
    for (std::size_t k = 0; k < m; ++k)
      out.matrix()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(cols[k])) = v[k] * scale;
  });
  return out;
}

double plancherel_defect(const OperatorRep& a) {
  const double hs = a.hs_norm();
  if (hs == 0.0) throw QhaError("plancherel_defect: zero operator");
  const Symbol f = fourier_weyl(a);
  double s = 0.0;
  for (const auto& v : f.values()) s += std::norm(v);
  const double l2 = std::sqrt(s * a.grid().cell_volume() * normalization(a.grid().d()).fw_measure_prefactor);
  return std::abs(l2 - hs) / hs;
}

}  // namespace qha

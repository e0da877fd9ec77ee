#include "doctest.h"
#include "oracles.hpp"
#include "qha/calculus.hpp"
#include "qha/stft_modulation.hpp"

using namespace qha;

namespace {

const PhaseGrid kTiny(1, 8, 4.0);
const PhaseGrid kGrid(1, 32, 16.0);
const PhaseGrid kDefault(1, 64, 16.0);

std::vector<long> centered_coords(const PhaseGrid& g, std::size_t flat) {
  std::vector<std::size_t> dig(g.axes());
  unravel(flat, g.axes(), g.n(), dig.data());
  std::vector<long> c;
  for (auto v : dig) c.push_back(g.centered(v));
  return c;
}

STFTOptions full() { return {1, false}; }

// Σ_u f(u) conj(g(u − z)) e^{−iσ(w,u)} · cell, index by index.
Complex naive_function(const Symbol& f, const Symbol& g, std::size_t z, std::size_t w) {
  const PhaseGrid& gr = f.grid();
  const std::size_t rank = gr.axes(), n = gr.n();
  std::vector<std::size_t> du(rank), dz(rank), ds(rank);
  unravel(z, rank, n, dz.data());
  Complex acc{};
  for (std::size_t u = 0; u < f.size(); ++u) {
    unravel(u, rank, n, du.data());
    for (std::size_t a = 0; a < rank; ++a)
      ds[a] = wrap_index(static_cast<long>(du[a]) - static_cast<long>(dz[a]) + static_cast<long>(n / 2), n);
    acc += f[u] * std::conj(g[ravel(ds.data(), rank, n)]) * std::polar(1.0, -symplectic_form(gr.point(w), gr.point(u)));
  }
  return acc * gr.cell_volume();
}

Complex naive_operator(const OperatorRep& a, const OperatorRep& b, std::size_t z, std::size_t w) {
  const PhaseGrid& g = a.grid();
  const OperatorRep x = op_modulate_lattice(op_shift_lattice(b, centered_coords(g, z)), centered_coords(g, w));
  return (a.matrix() * x.matrix().adjoint()).trace();
}

// Literal W_{w/2} α_z(B) W_{w/2}.
Complex literal_operator(const OperatorRep& a, const OperatorRep& b, std::size_t z, std::size_t w) {
  const PhaseGrid& g = a.grid();
  const OperatorRep x = op_modulate(op_shift_lattice(b, centered_coords(g, z)), g.point(w));
  return (a.matrix() * x.matrix().adjoint()).trace();
}

double max_slice_diff(const STFTData& x, const STFTData& y, double scale = 1.0) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.slices.size(); ++i)
    for (std::size_t w = 0; w < x.slices[i].size(); ++w)
      worst = std::max(worst, std::abs(x.slices[i][w] - scale * y.slices[i][w]));
  return worst;
}

}  // namespace

TEST_CASE("function STFT against the naive double sum") {
  const Symbol f = make_symbol(SymbolFamily::gaussian(0.8, PhasePoint{{0.3}, {-0.4}}), kTiny);
  const Symbol g = window_symbol(WindowSpec::symbol(), kTiny);
  const STFTData v = stft_function(f, g, full());
  REQUIRE(v.z_nodes.size() == kTiny.symbol_size());
  double worst = 0.0;
  for (std::size_t i = 0; i < v.z_nodes.size(); ++i)
    for (std::size_t w = 0; w < kTiny.symbol_size(); ++w)
      worst = std::max(worst, std::abs(v.slices[i][w] - naive_function(f, g, v.z_nodes[i], w)));
  CHECK(worst < 1e-8);
  CHECK(mixed_norm_inf1(stft_function(Symbol(kTiny), g)) == 0.0);
  CHECK_THROWS_AS(stft_function(f, Symbol(kTiny)), QhaError);
}

TEST_CASE("operator STFT against naive traces") {
  const OperatorRep b = window_operator(WindowSpec::projector(), kTiny);
  const OperatorRep a = rank_one(kTiny, window_operator(WindowSpec::projector(0.7, PhasePoint{{0.5}, {1.0}}), kTiny).matrix().col(3),
                                 window_operator(WindowSpec::projector(1.3), kTiny).matrix().col(4));
  for (const OperatorRep& x : {a, oracle::random_smooth_operator(kTiny)}) {
    const STFTData v = stft_operator(x, b, full());
    double worst = 0.0;
    for (std::size_t i = 0; i < v.z_nodes.size(); ++i)
      for (std::size_t w = 0; w < kTiny.symbol_size(); ++w)
        worst = std::max(worst, std::abs(v.slices[i][w] - naive_operator(x, b, v.z_nodes[i], w)));
    CHECK(worst < 1e-8);
  }
  CHECK(mixed_norm_inf1(stft_operator(OperatorRep(kTiny), b)) == 0.0);
  CHECK_THROWS_AS(stft_operator(a, OperatorRep(kTiny)), QhaError);
  const PhaseGrid g2(2, 4, 4.0);
  const OperatorRep a2 = oracle::random_smooth_operator(g2);
  const OperatorRep b2 = window_operator(WindowSpec::projector(), g2);
  const STFTData v2 = stft_operator(a2, b2, full());
  double worst = 0.0;
  for (std::size_t i = 0; i < v2.z_nodes.size(); i += 7)
    for (std::size_t w = 0; w < g2.symbol_size(); w += 3)
      worst = std::max(worst, std::abs(v2.slices[i][w] - naive_operator(a2, b2, v2.z_nodes[i], w)));
  CHECK(worst < 1e-8);
}

TEST_CASE("lattice modulation agrees with the two-sided Weyl product off the edge") {
  const OperatorRep a = oracle::random_smooth_operator(kDefault);
  const OperatorRep b = window_operator(WindowSpec::projector(), kDefault);
  const STFTData v = stft_operator(a, b, {4, false});
  double worst = 0.0;
  for (std::size_t i = 0; i < v.z_nodes.size(); i += 37) {
    const auto zc = centered_coords(kDefault, v.z_nodes[i]);
    if (std::abs(zc[0]) > 8) continue;
    for (std::size_t w = 0; w < kDefault.symbol_size(); w += 29) {
      const auto wc = centered_coords(kDefault, w);
      if (std::abs(wc[0]) > 8 || std::abs(wc[1]) > 16) continue;
      worst = std::max(worst, std::abs(v.slices[i][w] - literal_operator(a, b, v.z_nodes[i], w)));
    }
  }
  CHECK(worst < 1e-8);
  const auto wc = std::vector<long>{2, -3};
  CHECK(max_abs_diff(op_modulate_lattice(a, wc), op_modulate(a, kDefault.lattice_point(wc))) < 1e-8);
}

TEST_CASE("STFT covariance under lattice shifts") {
  const Symbol f = oracle::random_smooth_symbol(kGrid);
  const Symbol g = window_symbol(WindowSpec::symbol(), kGrid);
  const std::vector<long> u{3, -2};
  const Symbol fu = shift_function(f, kGrid.lattice_point(u));
  const STFTData v = stft_function(f, g, full());
  const STFTData vu = stft_function(fu, g, full());
  double worst = 0.0;
  for (std::size_t z = 0; z < kGrid.symbol_size(); ++z) {
    auto c = centered_coords(kGrid, z);
    std::vector<std::size_t> dig(2);
    for (std::size_t a = 0; a < 2; ++a) dig[a] = wrap_index(c[a] + u[a] + 16, 32);
    const std::size_t zu = ravel(dig.data(), 2, 32);
    for (std::size_t w = 0; w < kGrid.symbol_size(); ++w)
      worst = std::max(worst, std::abs(std::abs(vu.slices[zu][w]) - std::abs(v.slices[z][w])));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("transfer identity and matched-window isometry") {
  const OperatorRep b = window_operator(WindowSpec::projector(), kDefault);
  const Symbol f = oracle::random_smooth_symbol(kDefault);
  const OperatorRep a = op_weyl(f);
  const STFTData vop = stft_operator(a, b, {2, false});
  const STFTData vfn = stft_function(symbol_of(a), symbol_of(b), {2, false});
  REQUIRE(vop.z_nodes == vfn.z_nodes);
  CHECK(max_slice_diff(vfn, vop, 2.0 * kPi) < 1e-8);
  const STFTData matched = stft_function(f, matched_window(b), {2, false});
  CHECK(max_slice_diff(matched, vop) < 1e-8);
  const double mo = m_inf1_norm(a, b), mf = m_inf1_norm(f, matched_window(b));
  CHECK(std::abs(mo - mf) < 1e-6 * mo);
  CHECK(m_inf1_norm(OperatorRep(kDefault), b) == 0.0);
  // The ground-state window is explicit: (2π)^{−1} · 2 e^{−|z|²}.
  Symbol closed(kDefault);
  for (std::size_t i = 0; i < closed.size(); ++i) {
    double r2 = 0.0;
    for (double c : kDefault.point(i).axes()) r2 += c * c;
    closed[i] = std::exp(-r2) / kPi;
  }
  CHECK(max_abs_diff(matched_window(b), closed) < 1e-8);
}

TEST_CASE("mixed norm basics") {
  STFTData f{kTiny, {0, 1}, {ComplexVector(kTiny.symbol_size()), ComplexVector(kTiny.symbol_size())}};
  CHECK(mixed_norm_inf1(f) == 0.0);
  f.slices[1][5] = 1.0;
  CHECK(mixed_norm_inf1(f) == doctest::Approx(kTiny.cell_volume()));
  f.slices[0][5] = Complex{0.0, -0.5};
  f.slices[0][6] = 2.0;
  CHECK(mixed_norm_inf1(f) == doctest::Approx(3.0 * kTiny.cell_volume()));
  CHECK(mixed_norm_inf1(f) >= 2.0 * kTiny.cell_volume());
}

TEST_CASE("window equivalence") {
  const Symbol g1 = window_symbol(WindowSpec::symbol(1.0), kGrid);
  const Symbol g2 = window_symbol(WindowSpec::symbol(2.0), kGrid);
  double lo = INFINITY, hi = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Symbol f = oracle::random_smooth_symbol(kGrid, 1 + i % 3);
    const double r = m_inf1_norm(f, g1) / m_inf1_norm(f, g2);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(lo >= 1.0 / 20.0);
  CHECK(hi <= 20.0);
}

TEST_CASE("embedding bound for the function side") {
  CHECK(embedding_integral(1) == 12.0);
  CHECK(embedding_integral(2) == 80.0);
  const Symbol g = window_symbol(WindowSpec::symbol(), kGrid);
  const Symbol f = make_symbol(SymbolFamily::gaussian(1.5), kGrid);
  double mf = 0.0;
  for (const auto& alpha : multi_indices_up_to(2, 3)) mf = std::max(mf, max_abs(symbol_partial(f, alpha)));
  const double c2 = m_inf1_norm(f, g) / mf;
  CHECK(c2 <= window_derivative_constant(g) * embedding_integral(1));
  CHECK(max_abs(f) <= m_inf1_norm(f, g) * 1e3);
}

TEST_CASE("refinement and worker count") {
  const Symbol f = oracle::random_smooth_symbol(kGrid);
  const Symbol g = window_symbol(WindowSpec::symbol(), kGrid);
  const double coarse = m_inf1_norm(f, g, {2, false});
  const double refined = m_inf1_norm(f, g, {2, true});
  const double exact = m_inf1_norm(f, g, {1, false});
  CHECK(coarse <= refined);
  CHECK(refined <= exact * (1 + 1e-12));
  CHECK(std::abs(refined - exact) < 0.05 * exact);
  const STFTData a = stft_operator(op_weyl(f), WindowSpec::projector());
  const STFTData b = stft_operator(op_weyl(f), WindowSpec::projector(), {}, Executor(3));
  CHECK(a.z_nodes == b.z_nodes);
  CHECK(max_slice_diff(a, b) == 0.0);
}

#include "doctest.h"
#include "oracles.hpp"

using namespace qha;

namespace {
const PhaseGrid kGrid(1, 64, 16.0);
double fro(const OperatorRep& a, const OperatorRep& b) { return (a.matrix() - b.matrix()).norm(); }
Symbol constant(const PhaseGrid& g, Complex c) { return Symbol(g, ComplexVector(g.symbol_size(), c)); }
}  // namespace

TEST_CASE("quantization of constants and adjoints") {
  CHECK(fro(op_weyl(constant(kGrid, 1.0)), OperatorRep::identity(kGrid)) < 1e-8);
  for (double tau : {0.0, 0.25, 1.0, -0.5}) CHECK(fro(op_tau(constant(kGrid, 1.0), tau), OperatorRep::identity(kGrid)) < 1e-8);
  const Symbol f = oracle::random_smooth_symbol(kGrid);
  const OperatorRep a = op_weyl(f);
  CHECK(max_abs_diff(op_weyl(f.conj()), a.adjoint()) < 1e-10);
  Symbol re = f;
  for (auto& v : re.values()) v = v.real();
  const OperatorRep h = op_weyl(re);
  CHECK(max_abs_diff(h, h.adjoint()) < 1e-10);
  const OperatorRep t = op_tau(f, 0.5);
  CHECK((t.matrix() - a.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Weyl and Kohn-Nirenberg rules against direct kernel quadrature at n = 16") {
  const PhaseGrid g(1, 16, 16.0);
  const Symbol cs = make_symbol(SymbolFamily::cos_sin(), g);
  const OperatorRep w = op_weyl(cs);
  CHECK(max_abs_diff(w, oracle::kernel_quadrature(cs, 0.5)) < 1e-6);
  // self-adjoint once the wrap jump of cos·sin is removed by a wide envelope
  const Symbol csw = make_symbol(SymbolFamily::cos_sin(), kGrid).times(make_symbol(SymbolFamily::gaussian(1.0), kGrid));
  const OperatorRep ww = op_weyl(csw);
  CHECK(max_abs_diff(ww, ww.adjoint()) < 1e-10);
  CHECK(max_abs_diff(op_tau(cs, 0.0), oracle::kernel_quadrature(cs, 0.0)) < 1e-6);
  const Symbol r = oracle::random_smooth_symbol(g);
  for (double tau : {0.5, 0.0, 0.25, 1.0}) CHECK(max_abs_diff(op_tau(r, tau), oracle::kernel_quadrature(r, tau)) < 1e-6);
}

TEST_CASE("covariance for every tau") {
  const Symbol f = oracle::random_smooth_symbol(kGrid);
  for (double tau : {0.5, 0.0, 0.25, 1.0}) {
    for (int i = 0; i < 3; ++i) {
      const auto c = oracle::random_lattice(1, 10);
      const auto z = kGrid.lattice_point(c);
      CHECK(fro(op_shift_lattice(op_tau(f, tau), c), op_tau(shift_function(f, z), tau)) < 1e-8);
      if (tau == 0.5 || tau == 0.25) {
        const auto u = oracle::random_point(1, 0.5);
        CHECK(fro(op_shift(op_tau(f, tau), u), op_tau(shift_function(f, u), tau)) < 1e-8);
      }
    }
  }
}

TEST_CASE("dequantization") {
  const Symbol one = constant(kGrid, 1.0);
  CHECK(max_abs_diff(symbol_of(OperatorRep::identity(kGrid)), one) < 1e-12);
  for (int i = 0; i < 5; ++i) {
    const Symbol f = oracle::random_smooth_symbol(kGrid);
    CHECK(max_abs_diff(symbol_of(op_weyl(f)), f) < 1e-8);
    CHECK(max_abs_diff(symbol_of(op_tau(f, 0.3), 0.3), f) < 1e-8);
  }
  for (int i = 0; i < 5; ++i) {
    const auto c = oracle::random_lattice(1, 20);
    const Symbol s = symbol_of(weyl_operator(kGrid, kGrid.lattice_point(c)));
    Symbol delta(kGrid);
    delta[(std::size_t(c[0] + 32)) * 64 + std::size_t(c[1] + 32)] = 64.0;
    CHECK(max_abs_diff(s, fourier_sigma(delta)) < 1e-12);
    for (const auto& v : s.values()) CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
  }
}

TEST_CASE("symbol change N_tau") {
  const Symbol f = oracle::random_smooth_symbol(kGrid);
  const Symbol same = n_tau(f, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(same[i] == f[i]);
  const OperatorRep kn = op_tau(f, 0.0);
  for (double tau : {-0.5, 0.25, 1.0}) CHECK(fro(op_tau(n_tau(f, tau), tau), kn) < 1e-8);
  CHECK(fro(op_tau(n_tau(f, -0.5), 0.0), op_weyl(f)) < 1e-8);

  // windowed cos·sin stays bounded with bounded derivatives
  Symbol cs = make_symbol(SymbolFamily::cos_sin(), kGrid).times(make_symbol(SymbolFamily::gaussian(3.0), kGrid));
  for (double tau : {-0.5, 0.25, 1.0}) {
    const Symbol nt = n_tau(cs, tau);
    for (const auto& alpha : multi_indices_up_to(2, 2)) CHECK(max_abs(symbol_partial(nt, alpha)) < 2.0);
  }
}

#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "qha/convolution_cv.hpp"

using namespace qha;

namespace {

std::vector<long> centered_coords(const PhaseGrid& g, std::size_t flat) {
  std::vector<std::size_t> dig(g.axes());
  unravel(flat, g.axes(), g.n(), dig.data());
  std::vector<long> c;
  for (auto v : dig) c.push_back(g.centered(v));
  return c;
}

OperatorRep naive_conv_fn_op(const Symbol& f, const OperatorRep& a) {
  OperatorRep out(a.grid());
  for (std::size_t z = 0; z < f.size(); ++z)
    out = out + op_shift_lattice(a, centered_coords(a.grid(), z)) * (f[z] * a.grid().cell_volume());
  return out;
}

Symbol naive_conv_op_op(const OperatorRep& a, const OperatorRep& b) {
  Symbol out(a.grid());
  const OperatorRep c = parity_conjugate(b);
  for (std::size_t z = 0; z < out.size(); ++z)
    out[z] = (a.matrix() * op_shift_lattice(c, centered_coords(a.grid(), z)).matrix()).trace();
  return out;
}

Symbol grid_delta(const PhaseGrid& g) {
  Symbol d(g);
  std::vector<std::size_t> mid(g.axes(), g.n() / 2);
  d[ravel(mid.data(), g.axes(), g.n())] = 1.0 / g.cell_volume();
  return d;
}

double total(const Symbol& f) {
  Complex s{};
  for (auto v : f.values()) s += v;
  return std::abs(s) * f.grid().cell_volume();
}

const PhaseGrid kSmall(1, 16, 8.0);
const PhaseGrid kGrid(1, 64, 16.0);

}  // namespace

TEST_CASE("function-operator convolution matches the lattice sum") {
  const Symbol f = oracle::random_smooth_symbol(kSmall);
  const OperatorRep a = oracle::random_smooth_operator(kSmall);
  CHECK(max_abs_diff(conv_fn_op(f, a), naive_conv_fn_op(f, a)) < 1e-12);
  CHECK(max_abs_diff(conv_fn_op(f, a, Executor(3)), conv_fn_op(f, a)) == 0.0);
  CHECK(max_abs_diff(conv_fn_op(grid_delta(kGrid), gaussian_projector(kGrid)), gaussian_projector(kGrid)) < 1e-8);
  CHECK(conv_fn_op(Symbol(kSmall), a).matrix().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("operator-operator convolution matches naive traces") {
  const OperatorRep a = oracle::random_smooth_operator(kSmall);
  const OperatorRep b = oracle::random_smooth_operator(kSmall);
  CHECK(max_abs_diff(conv_op_op(a, b), naive_conv_op_op(a, b)) < 1e-12);
  CHECK(max_abs_diff(conv_op_op(a, b), conv_op_op(b, a)) < 1e-8);
  const OperatorRep p = gaussian_projector(kGrid);
  const Symbol pp = conv_op_op(p, p);
  std::vector<std::size_t> mid(2, kGrid.n() / 2);
  const Complex at0 = pp[ravel(mid.data(), 2, kGrid.n())];
  CHECK(at0.real() >= 0.0);
  CHECK(std::abs(at0.imag()) < 1e-12);
}

TEST_CASE("convolution mass and Fourier identities") {
  const OperatorRep a = oracle::random_smooth_operator(kGrid);
  const OperatorRep b = oracle::random_smooth_operator(kGrid);
  const Symbol ab = conv_op_op(a, b);
  Complex mass{};
  for (auto v : ab.values()) mass += v * kGrid.cell_volume();
  const Complex expect = 2.0 * kPi * a.trace() * b.trace();
  CHECK(std::abs(mass - expect) < 1e-6 * std::abs(expect));

  const Symbol lhs = fourier_sigma(ab);
  const Symbol rhs = fourier_weyl(a).times(fourier_weyl(b));
  CHECK(max_abs_diff(lhs, rhs) < 1e-8);

  const Symbol f = oracle::random_smooth_symbol(kGrid);
  const Symbol fw = fourier_weyl(conv_fn_op(f, a));
  CHECK(max_abs_diff(fw, fourier_sigma(f).times(fourier_weyl(a)) * (2.0 * kPi)) < 1e-8);
}

TEST_CASE("Young inequalities on random pairs") {
  for (int trial = 0; trial < 20; ++trial) {
    const Symbol f = oracle::random_smooth_symbol(kSmall);
    const OperatorRep a = oracle::random_smooth_operator(kSmall);
    const OperatorRep b = oracle::random_smooth_operator(kSmall);
    const double a1 = schatten_norm(a, 1), b1 = schatten_norm(b, 1);
    const OperatorRep fa = conv_fn_op(f, a);
    const Symbol ab = conv_op_op(a, b);
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
      const double derived = std::pow(2.0 * kPi, std::isinf(p) ? 1.0 : 1.0 - 1.0 / p);
      CHECK(schatten_norm(fa, p) <= derived * lp_norm(f, p) * a1 * (1 + 1e-10));
      const double cp = std::isinf(p) ? 1.0 : std::pow(2.0 * kPi, 1.0 / p);
      CHECK(lp_norm(ab, p) <= cp * schatten_norm(a, p) * b1 * (1 + 1e-10));
    }
    CHECK(schatten_norm(fa, 1) <= lp_norm(f, 1) * a1 * (1 + 1e-10));
  }
  // The unit function saturates the p = ∞ case with the factor 2π.
  Symbol one(kGrid);
  for (auto& v : one.values()) v = 1.0;
  const OperatorRep p = gaussian_projector(kGrid);
  CHECK(std::abs(schatten_norm(conv_fn_op(one, p), INFINITY * 1.0) - 2.0 * kPi) < 1e-10);
}

TEST_CASE("convolution commutes with quantization") {
  const Symbol f = make_symbol(SymbolFamily::gaussian(1.0, PhasePoint{{0.3}, {-0.2}}), kGrid);
  const Symbol g = make_symbol(SymbolFamily::gaussian(1.0), kGrid);
  const Symbol lhs = conv_op_op(op_weyl(f), op_weyl(g));
  CHECK(max_abs_diff(lhs, convolve(f, g) * (1.0 / (2.0 * kPi))) < 1e-7);
  CHECK(max_abs_diff(conv_fn_op(f, op_weyl(g)), op_weyl(convolve(f, g))) < 1e-7);
}

TEST_CASE("delta approximants converge to the identity of convolution") {
  double prev = INFINITY;
  for (double width : {0.6, 0.3, 0.15}) {
    Symbol approx = make_symbol(SymbolFamily::gaussian(width), kGrid);
    approx = approx * (1.0 / total(approx));
    const Symbol f = make_symbol(SymbolFamily::gaussian(1.0), kGrid);
    const double defect = max_abs_diff(conv_fn_op(f, op_weyl(approx)), op_weyl(f));
    CHECK(defect < prev);
    prev = defect;
  }
}

TEST_CASE("Bessel potential of delta") {
  const Symbol g = bessel_delta(kGrid, 1);
  CHECK(max_abs_diff(g, reflect(g)) == 0.0);
  const Symbol ft = fourier_sigma(g) * (2.0 * kPi);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double r2 = 0.0;
    for (double c : kGrid.point(i).axes()) r2 += c * c;
    worst = std::max(worst, std::abs(ft[i] - 1.0 / (1.0 + r2)));
  }
  CHECK(worst < 1e-10);
  CHECK(total(g) == doctest::Approx(1.0).epsilon(1e-12));
  const double l1a = lp_norm(g, 1), l1b = lp_norm(bessel_delta(PhaseGrid(1, 128, 16.0), 1), 1);
  CHECK(std::abs(l1a / l1b - 1.0) < 0.05);
  CHECK_THROWS_AS(bessel_delta(kGrid, 0), QhaError);
}

TEST_CASE("Cordes kernel") {
  const CordesKernel k = cordes_kernel(kGrid);
  CHECK(k.trace_norm > 0.0);
  CHECK(max_abs_diff(k.K, k.K.adjoint()) < 1e-8);
  // tr K = ∫G/(2π) exactly; ‖K‖_{T¹} grows slowly with the number of resolved oscillator states.
  const CordesKernel k32 = cordes_kernel(PhaseGrid(1, 32, 16.0));
  CHECK(std::abs(k.K.trace() - 1.0 / (2.0 * kPi)) < 1e-12);
  CHECK(std::abs(k32.K.trace() - 1.0 / (2.0 * kPi)) < 1e-12);
  CHECK(k32.trace_norm < k.trace_norm);
  CHECK(k.trace_norm / k32.trace_norm < 1.15);
  const Symbol f = make_symbol(SymbolFamily::gaussian(), kGrid);
  CHECK(cordes_identity_defect(f, k) < 1e-5);
}

TEST_CASE("Calderon-Vaillancourt in both directions") {
  const CordesKernel k = cordes_kernel(kGrid);
  const NormReport zero = cv_bound(Symbol(kGrid), 2.0, k);
  CHECK(zero.entries[0].value == 0.0);
  CHECK(zero.all_pass());

  const Symbol g = make_symbol(SymbolFamily::gaussian(), kGrid);
  const NormReport r2 = cv_bound(g, 2.0, k);
  CHECK(r2.all_pass());
  CHECK(r2.entries[0].extra.at("ratio") < 1.0);

  const Symbol cs = make_symbol(SymbolFamily::cos_sin(), kGrid).times(make_symbol(SymbolFamily::gaussian(2.0), kGrid));
  CHECK(cv_bound(cs, 1.0, k).all_pass());
  CHECK_THROWS_AS(cv_bound(g, 0.5, k), QhaError);

  const OperatorRep p = gaussian_projector(kGrid);
  const NormReport rp = reverse_cv_bound(build_derivative_table(p, 2), 2.0, k);
  CHECK(rp.all_pass());
  const NormReport rz = reverse_cv_bound(build_derivative_table(OperatorRep(kGrid), 2), 2.0, k);
  CHECK(rz.all_pass());
  CHECK(rz.entries[0].value == 0.0);
  const NormReport rg = reverse_cv_bound(build_derivative_table(op_weyl(g), 2), 1.0, k);
  CHECK(rg.find("symbol_kernel_identity")->value < 1e-4);
  CHECK(rg.all_pass());
  CHECK_THROWS_AS(reverse_cv_bound(build_derivative_table(p, 1), 2.0, k), QhaError);
}

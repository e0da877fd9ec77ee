#include <limits>
#include "doctest.h"
#include "oracles.hpp"
#include "qha/calculus.hpp"

using namespace qha;

namespace {
const PhaseGrid kGrid(1, 64, 16.0);
DerivativeOptions fd(double step = 0.0, unsigned levels = 1) {
  DerivativeOptions o;
  o.scheme = DerivativeScheme::finite_diff;
  o.step = step;
  o.richardson_levels = levels;
  return o;
}
double opdiff(const OperatorRep& a, const OperatorRep& b) { return operator_norm(a - b); }
}  // namespace

TEST_CASE("derivatives of the identity vanish") {
  const OperatorRep id = OperatorRep::identity(kGrid);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(derivative(id, MultiIndex::unit(2, j)).matrix().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(derivative(id, MultiIndex::unit(2, j), fd()).matrix().cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("derivative intertwines with quantization through order 3") {
  const Symbol f = oracle::random_smooth_symbol(kGrid);
  const OperatorRep a = op_weyl(f);
  for (const auto& alpha : multi_indices_up_to(2, 3)) {
    const double sign = alpha.order() % 2 == 0 ? 1.0 : -1.0;
    const OperatorRep rhs = op_weyl(symbol_partial(f, alpha)) * sign;
    CHECK(max_abs_diff(derivative(a, alpha), rhs) < 1e-5);
  }
  for (std::size_t j = 0; j < 2; ++j) {
    const auto e = MultiIndex::unit(2, j);
    CHECK(max_abs_diff(derivative(a, e, fd()), op_weyl(symbol_partial(f, e)) * -1.0) < 1e-5);
  }
}

TEST_CASE("finite differences against commutators") {
  const OperatorRep a = op_weyl(make_symbol(SymbolFamily::gaussian(), kGrid));
  for (std::size_t j = 0; j < 2; ++j) {
    const auto e = MultiIndex::unit(2, j);
    const OperatorRep ref = derivative(a, e);
    CHECK(opdiff(derivative(a, e, fd()), ref) < 1e-5);
    CHECK(opdiff(derivative(a, e, fd(1e-3)), ref) < 1e-5);
    // second order: halving the step quarters the defect
    const double t = 0.05;
    const double e1 = opdiff(derivative(a, e, fd(t, 0)), ref);
    const double e2 = opdiff(derivative(a, e, fd(t / 2, 0)), ref);
    const double ratio = e1 / e2;
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
  }
}

TEST_CASE("mixed partials commute") {
  const OperatorRep a = oracle::random_smooth_operator(kGrid);
  const auto ex = MultiIndex::unit(2, 0), exi = MultiIndex::unit(2, 1);
  const OperatorRep xy = derivative(derivative(a, ex), exi);
  const OperatorRep yx = derivative(derivative(a, exi), ex);
  CHECK(max_abs_diff(xy, yx) < 1e-5);
  CHECK(max_abs_diff(xy, derivative(a, MultiIndex{1, 1})) == 0.0);
}

TEST_CASE("F_W turns derivatives into symplectic multipliers") {
  const OperatorRep a = oracle::random_smooth_operator(kGrid);
  const Symbol fa = fourier_weyl(a);
  const double scale = max_abs(fa);
  for (std::size_t j = 0; j < 2; ++j) {
    const Symbol fd_ = fourier_weyl(derivative(a, MultiIndex::unit(2, j)));
    double worst = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
      const auto w = kGrid.point(i);
      const PhasePoint e = PhasePoint::from_axes(j == 0 ? std::vector<double>{1, 0} : std::vector<double>{0, 1});
      worst = std::max(worst, std::abs(fd_[i] - kI * symplectic_form(e, w) * fa[i]));
    }
    CHECK(worst < 1e-8 * scale);
  }
  for (const auto& alpha : multi_indices_up_to(2, 3)) {
    const Symbol fd_ = fourier_weyl(derivative(a, alpha));
    double worst = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
      const auto w = kGrid.point(i);
      const std::vector<double> jw{-w.xi[0], w.x[0]};
      worst = std::max(worst, std::abs(std::abs(fd_[i]) - std::abs(alpha.monomial(jw)) * std::abs(fa[i])));
    }
    CHECK(worst < 1e-8 * scale * 100);
  }
}

TEST_CASE("derivative preconditions") {
  const OperatorRep a = gaussian_projector(kGrid);
  CHECK_THROWS_AS(derivative(a, MultiIndex{9, 0}), QhaError);
  CHECK_THROWS_AS(derivative(a, MultiIndex{1, 0}, fd(1e-12)), QhaError);
  CHECK_THROWS_AS(derivative(a, MultiIndex{1, 0, 0}), QhaError);
}

TEST_CASE("tables and C^k norms") {
  const DerivativeTable it = build_derivative_table(OperatorRep::identity(kGrid), 4);
  for (unsigned k = 0; k <= 4; ++k) CHECK(ck_norm(it, k) == doctest::Approx(1.0));
  const OperatorRep a = op_weyl(make_symbol(SymbolFamily::gaussian(), kGrid));
  const DerivativeTable t = build_derivative_table(a, 4);
  CHECK(max_abs_diff(t.at(MultiIndex{0, 0}).op, a) == 0.0);
  for (const auto& alpha : multi_indices_up_to(2, 4)) CHECK(max_abs_diff(t.at(alpha).op, derivative(a, alpha)) < 1e-12);
  for (unsigned k = 1; k <= 4; ++k) CHECK(ck_norm(t, k) >= ck_norm(t, k - 1));
  CHECK_THROWS_AS(ck_norm(t, 5), QhaError);
  // parallel construction gives identical tables
  const DerivativeTable tp = build_derivative_table(a, 4, {}, Executor(3));
  for (const auto& [alpha, e] : t.entries()) CHECK((tp.at(alpha).op.matrix() - e.op.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Schatten and Sobolev norms") {
  const OperatorRep p = gaussian_projector(kGrid);
  for (double q : {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()}) CHECK(schatten_norm(p, q) == doctest::Approx(1.0).epsilon(1e-12));
  const OperatorRep a = oracle::random_smooth_operator(kGrid);
  CHECK(schatten_norm(a, 2) == doctest::Approx(a.matrix().norm()).epsilon(1e-12));
  const OperatorRep s = op_shift_lattice(a, {5, -3});
  for (double q : {1.0, 2.0, std::numeric_limits<double>::infinity()}) CHECK(std::abs(schatten_norm(s, q) - schatten_norm(a, q)) < 1e-10 * schatten_norm(a, q));
  CHECK_THROWS_AS(schatten_norm(a, 0.5), QhaError);

  CHECK(sobolev_norm(Symbol(kGrid), 3, 2.0) == 0.0);
  const Symbol g = make_symbol(SymbolFamily::gaussian(), kGrid);
  CHECK(std::abs(sobolev_norm(g, 0, 2.0) - std::sqrt(kPi)) < 1e-8);
  const DerivativeTable t = build_derivative_table(a, 2);
  CHECK(sobolev_norm(t, 0, 1.5) == doctest::Approx(schatten_norm(a, 1.5)));
  CHECK_THROWS_AS(sobolev_norm(g, 1, 0.9), QhaError);
}

TEST_CASE("derivative algebra") {
  const OperatorRep id = OperatorRep::identity(kGrid);
  AlgebraOptions opts;
  opts.derivative = fd(1e-3);
  const NormReport r0 = verify_derivative_algebra(id, id, opts);
  for (const auto& e : r0.entries) CHECK(e.value < 1e-10);

  const OperatorRep a = oracle::random_smooth_operator(kGrid);
  const OperatorRep b = id + op_weyl(make_symbol(SymbolFamily::gaussian(), kGrid)) * 0.1;
  const NormReport r = verify_derivative_algebra(a, b, opts);
  CHECK(r.entries.size() == 4);
  for (const auto& e : r.entries) {
    CHECK(e.value < 1e-5);
    CHECK(e.pass());
  }
  const NormReport rc = verify_derivative_algebra(a, b);
  for (const auto& e : rc.entries) CHECK(e.value < 1e-10);

  const NormReport rs = verify_derivative_algebra(id * 2.5, b, opts);
  CHECK(rs.find("product_rule")->value < 1e-10);

  const NormReport sing = verify_derivative_algebra(a, gaussian_projector(kGrid), opts);
  CHECK(sing.find("inverse_rule")->skipped);
  CHECK(sing.all_pass());
}

TEST_CASE("spectral invariance: geometric bound for the inverse") {
  const OperatorRep t = op_weyl(make_symbol(SymbolFamily::gaussian(), kGrid));
  const double eps = 0.05;
  const OperatorRep e = t * eps;
  CHECK(operator_norm(e) < 0.5);
  const DerivativeTable et = build_derivative_table(e, 4);
  const OperatorRep b = OperatorRep::identity(kGrid) + e;
  const DerivativeTable bt = build_derivative_table(OperatorRep(kGrid, b.matrix().inverse()), 4);
  for (unsigned k = 0; k <= 4; ++k) {
    const double bound = geometric_inverse_bound(et, k);
    CHECK(std::isfinite(bound));
    CHECK(ck_norm(bt, k) <= bound);
  }
}

#include <chrono>

#include "doctest.h"
#include "qha/finite_qha.hpp"

using namespace qha;
using namespace qha::finite;

namespace {

// Entry ratio of two matrices that are multiples of each other.
Complex ratio(const Matrix& x, const Matrix& y) {
  Eigen::Index i = 0, j = 0;
  y.cwiseAbs().maxCoeff(&i, &j);
  return x(i, j) / y(i, j);
}

}  // namespace

TEST_CASE("finite Weyl operators") {
  const FiniteGroup g(5);
  for (std::int64_t c = 0; c < 5; ++c) {
    CHECK((weyl_finite(g, {0, 0}, {c}) - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t z = 0; z < g.points(); ++z)
      for (std::size_t w = 0; w < g.points(); ++w) {
        const Point pz = point_of(g, z), pw = point_of(g, w);
        const Matrix prod = weyl_finite(g, pz, {c}) * weyl_finite(g, pw, {c});
        const Matrix sum = weyl_finite(g, {pz.a + pw.a, pz.b + pw.b}, {c});
        const Complex m = ratio(prod, sum);
        CHECK((prod - m * sum).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(m - multiplier(g, pz, pw, {c})) < 1e-12);
      }
  }
  const Matrix w = weyl_finite(g, {2, 3}, {1});
  CHECK((w.adjoint() - weyl_finite(g, {-2, -3}, {0})).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("finite Fourier-Weyl transform") {
  const FiniteGroup g(5);
  const PhaseFunction fi = fw_finite(g, Matrix::Identity(5, 5), {2});
  for (std::size_t w = 0; w < g.points(); ++w) CHECK(std::abs(fi(static_cast<Eigen::Index>(w)) - (w == 0 ? 5.0 : 0.0)) < 1e-12);
  const Matrix a = Matrix::Random(5, 5);
  const PhaseFunction f = fw_finite(g, a, {3});
  CHECK(f.squaredNorm() == doctest::Approx(5.0 * a.squaredNorm()).epsilon(1e-13));
  CHECK((fw_inverse_finite(g, f, {3}) - a).cwiseAbs().maxCoeff() < 1e-12);
  const PhaseFunction s = fsigma_finite(g, f);
  CHECK((fsigma_finite(g, s) - f).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("finite quantization") {
  const FiniteGroup g(7);
  for (std::int64_t c : {0, 3, 4}) {
    CHECK((op_phi_finite(g, PhaseFunction::Ones(49), {c}) - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-12);
    const Matrix t = change_of_quantization(g, {c}, {(c + 2) % 7});
    CHECK(Eigen::FullPivLU<Matrix>(t).rank() == 49);
  }
  // Kohn-Nirenberg kernel from its defining formula: (1/N) Σ_ξ f(t, ξ) e^{2πi ξ (t − s)/N}.
  const PhaseFunction f = PhaseFunction::Random(49);
  const Matrix kn = op_phi_finite(g, f, {0});
  double worst = 0.0;
  for (std::int64_t t = 0; t < 7; ++t)
    for (std::int64_t s = 0; s < 7; ++s) {
      Complex acc{};
      for (std::int64_t xi = 0; xi < 7; ++xi) acc += f(t * 7 + xi) * g.root(xi * (t - s));
      worst = std::max(worst, std::abs(kn(t, s) - acc / 7.0));
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("exhaustive verification") {
  for (std::int64_t n : {3, 5, 7}) {
    const auto start = std::chrono::steady_clock::now();
    const NormReport r = exhaustive_verify(n);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(r.all_pass());
    CHECK(secs < 10.0);
    for (const auto& e : r.entries)
      if (e.name != "change_of_quantization_rank" && e.name != "plancherel_variance") CHECK(e.value <= 1e-12);
  }
  CHECK(exhaustive_verify(5).find("plancherel")->extra.at("calibration") == doctest::Approx(5.0));
  CHECK_THROWS_AS(exhaustive_verify(4), QhaError);
  CHECK_THROWS_AS(exhaustive_verify(15), QhaError);
  CHECK_THROWS_AS(FiniteGroup(1), QhaError);
}

TEST_CASE("one-sided modulation") {
  const FiniteGroup g(5);
  const Matrix a = Matrix::Random(5, 5);
  const Matrix m = modulate_finite(g, a, {1, 2}, {3});
  CHECK(std::abs(m.norm() - a.norm()) < 1e-12);
  CHECK((modulate_finite(g, a, {0, 0}, {3}) - a).cwiseAbs().maxCoeff() == 0.0);
}

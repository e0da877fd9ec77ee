#include "qha/finite_qha.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qha::finite {

FiniteGroup::FiniteGroup(std::int64_t n) : n_(n) {
  if (n < 3) throw QhaError("finite group: N must be at least 3");
  if (n % 2 == 0) throw QhaError("finite group: N must be odd so that 2 is invertible mod N");
  roots_.resize(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k)
    roots_[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
}

Point point_of(const FiniteGroup& g, std::size_t flat) {
  const auto n = static_cast<std::size_t>(g.N());
  return {static_cast<std::int64_t>(flat / n), static_cast<std::int64_t>(flat % n)};
}

std::size_t flat_of(const FiniteGroup& g, Point z) {
  return static_cast<std::size_t>(g.reduce(z.a) * g.N() + g.reduce(z.b));
}

Matrix weyl_finite(const FiniteGroup& g, Point z, HomZN phi) {
  const std::int64_t n = g.N();
  Matrix w = Matrix::Zero(n, n);
  for (std::int64_t t = 0; t < n; ++t) w(t, g.reduce(t - z.a)) = g.root(z.b * t - z.b * phi.c * z.a);
  return w;
}

Complex multiplier(const FiniteGroup& g, Point z, Point w, HomZN phi) {
  return g.root(z.b * phi.c * w.a + w.b * phi.c * z.a - w.b * z.a);
}

Complex sigma(const FiniteGroup& g, Point z, Point w) { return g.root(z.b * w.a - w.b * z.a); }

PhaseFunction fsigma_finite(const FiniteGroup& g, const PhaseFunction& f) {
  const std::size_t m = g.points();
  PhaseFunction out = PhaseFunction::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t w = 0; w < m; ++w) {
    Complex acc{};
    for (std::size_t z = 0; z < m; ++z) acc += sigma(g, point_of(g, z), point_of(g, w)) * f(static_cast<Eigen::Index>(z));
    out(static_cast<Eigen::Index>(w)) = acc / static_cast<double>(g.N());
  }
  return out;
}

PhaseFunction fw_finite(const FiniteGroup& g, const Matrix& a, HomZN phi) {
  const std::size_t m = g.points();
  PhaseFunction out(static_cast<Eigen::Index>(m));
  for (std::size_t w = 0; w < m; ++w)
    out(static_cast<Eigen::Index>(w)) = (a * weyl_finite(g, point_of(g, w), phi).adjoint()).trace();
  return out;
}

Matrix fw_inverse_finite(const FiniteGroup& g, const PhaseFunction& f, HomZN phi) {
  const std::int64_t n = g.N();
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t z = 0; z < g.points(); ++z) out += f(static_cast<Eigen::Index>(z)) * weyl_finite(g, point_of(g, z), phi);
  return out / static_cast<double>(n);
}

Matrix op_phi_finite(const FiniteGroup& g, const PhaseFunction& f, HomZN phi) {
  return fw_inverse_finite(g, fsigma_finite(g, f), phi);
}

PhaseFunction symbol_phi_finite(const FiniteGroup& g, const Matrix& a, HomZN phi) {
  return fsigma_finite(g, fw_finite(g, a, phi));
}

Matrix shift_finite(const FiniteGroup& g, const Matrix& a, Point z) {
  const Matrix w = weyl_finite(g, z, HomZN{0});
  return w * a * w.adjoint();
}

PhaseFunction shift_finite(const FiniteGroup& g, const PhaseFunction& f, Point z) {
  PhaseFunction out(f.size());
  for (std::size_t u = 0; u < g.points(); ++u) {
    const Point p = point_of(g, u);
    out(static_cast<Eigen::Index>(u)) = f(static_cast<Eigen::Index>(flat_of(g, {p.a - z.a, p.b - z.b})));
  }
  return out;
}

Matrix modulate_finite(const FiniteGroup& g, const Matrix& a, Point z, HomZN phi) {
  return weyl_finite(g, z, phi) * a;
}

Matrix parity_finite(const FiniteGroup& g, const Matrix& a) {
  const std::int64_t n = g.N();
  Matrix out(n, n);
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j) out(i, j) = a(g.reduce(-i), g.reduce(-j));
  return out;
}

Matrix conv_fn_op_finite(const FiniteGroup& g, const PhaseFunction& f, const Matrix& a) {
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  for (std::size_t z = 0; z < g.points(); ++z) out += f(static_cast<Eigen::Index>(z)) * shift_finite(g, a, point_of(g, z));
  return out / static_cast<double>(g.N());
}

PhaseFunction conv_op_op_finite(const FiniteGroup& g, const Matrix& a, const Matrix& b) {
  const Matrix pb = parity_finite(g, b);
  PhaseFunction out(static_cast<Eigen::Index>(g.points()));
  for (std::size_t z = 0; z < g.points(); ++z)
    out(static_cast<Eigen::Index>(z)) = (a * shift_finite(g, pb, point_of(g, z))).trace();
  return out;
}

Matrix change_of_quantization(const FiniteGroup& g, HomZN from, HomZN to) {
  const auto m = static_cast<Eigen::Index>(g.points());
  Matrix t(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    PhaseFunction e = PhaseFunction::Zero(m);
    e(k) = 1.0;
    t.col(k) = symbol_phi_finite(g, op_phi_finite(g, e, from), to);
  }
  return t;
}

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix random_matrix(std::int64_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex{nd(rng), nd(rng)};
  return a;
}

PhaseFunction random_function(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  PhaseFunction f(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = Complex{nd(rng), nd(rng)};
  return f;
}

}  // namespace

NormReport exhaustive_verify(std::int64_t n, std::uint64_t seed, double tol) {
  if (n % 2 == 0) throw QhaError("exhaustive_verify: N must be odd");
  if (n > 13) throw QhaError("exhaustive_verify: N must not exceed 13");
  const FiniteGroup g(n);
  const std::size_t m = g.points();
  std::mt19937_64 rng(seed);
  NormReport r;
  r.metadata["N"] = n;
  const std::string tag = "Z_" + std::to_string(n) + ": ";
  std::vector<HomZN> homs;
  for (std::int64_t c = 0; c < n; ++c) homs.push_back({c});
  const Matrix id = Matrix::Identity(n, n);

  double unit = 0.0, ident = 0.0, ccr = 0.0, adj = 0.0, sig = 0.0, fwrel = 0.0;
  for (const HomZN phi : homs) {
    ident = std::max(ident, max_abs(weyl_finite(g, {0, 0}, phi) - id));
    for (std::size_t z = 0; z < m; ++z) {
      const Point pz = point_of(g, z);
      const Matrix wz = weyl_finite(g, pz, phi);
      unit = std::max(unit, max_abs(wz * wz.adjoint() - id));
      adj = std::max(adj, max_abs(wz.adjoint() - weyl_finite(g, {-pz.a, -pz.b}, HomZN{g.reduce(1 - phi.c)})));
      for (std::size_t w = 0; w < m; ++w) {
        const Point pw = point_of(g, w);
        const Matrix prod = wz * weyl_finite(g, pw, phi);
        ccr = std::max(ccr, max_abs(prod - multiplier(g, pz, pw, phi) * weyl_finite(g, {pz.a + pw.a, pz.b + pw.b}, phi)));
        sig = std::max(sig, std::abs(multiplier(g, pz, pw, phi) / multiplier(g, pw, pz, phi) - sigma(g, pz, pw)));
      }
    }
    const Matrix a = random_matrix(n, rng);
    const PhaseFunction f0 = fw_finite(g, a, HomZN{0}), fp = fw_finite(g, a, phi);
    for (std::size_t w = 0; w < m; ++w) {
      const Point pw = point_of(g, w);
      fwrel = std::max(fwrel, std::abs(fp(static_cast<Eigen::Index>(w)) - g.root(pw.b * phi.c * pw.a) * f0(static_cast<Eigen::Index>(w))));
    }
  }
  r.add("weyl_identity", tag + "W_0 = I", ident, tol);
  r.add("weyl_unitary", tag + "W_z unitary", unit, tol);
  r.add("ccr_multiplier", tag + "W_z W_w = m(z,w) W_{z+w}", ccr, tol);
  r.add("sigma_phi_independent", tag + "m(z,w)/m(w,z) = sigma(z,w)", sig, tol);
  r.add("adjoint_relation", tag + "W^Phi_z* = W^{I-Phi}_{-z}", adj, tol);
  r.add("fw_phi_relation", tag + "F^Phi_W = <xi, Phi x> F^0_W", fwrel, tol);

  // Plancherel: one constant for all operators and all Φ.
  std::vector<double> ratios;
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = random_matrix(n, rng);
    const HomZN phi = homs[static_cast<std::size_t>(trial) % homs.size()];
    ratios.push_back(fw_finite(g, a, phi).squaredNorm() / a.squaredNorm());
  }
  double mean = 0.0;
  for (double x : ratios) mean += x;
  mean /= static_cast<double>(ratios.size());
  double var = 0.0;
  for (double x : ratios) var += (x - mean) * (x - mean);
  var /= static_cast<double>(ratios.size());
  auto& pl = r.add("plancherel", tag + "||F_W A||^2 = c ||A||_F^2", std::abs(mean - static_cast<double>(n)) / n, tol);
  pl.extra = {{"calibration", mean}, {"variance", var}};
  r.add("plancherel_variance", tag + "single calibration constant", var, 1e-20);

  double unit_sym = 0.0, roundtrip = 0.0, cov = 0.0, cov_sym = 0.0, diff = 0.0;
  PhaseFunction one = PhaseFunction::Ones(static_cast<Eigen::Index>(m));
  for (const HomZN phi : homs) {
    unit_sym = std::max(unit_sym, max_abs(op_phi_finite(g, one, phi) - id));
    for (std::size_t k = 0; k < m; ++k) {
      PhaseFunction e = PhaseFunction::Zero(static_cast<Eigen::Index>(m));
      e(static_cast<Eigen::Index>(k)) = 1.0;
      roundtrip = std::max(roundtrip, (symbol_phi_finite(g, op_phi_finite(g, e, phi), phi) - e).cwiseAbs().maxCoeff());
    }
    const PhaseFunction f = random_function(m, rng);
    const Matrix op = op_phi_finite(g, f, phi);
    for (std::size_t z = 0; z < m; ++z) {
      const Point pz = point_of(g, z);
      cov = std::max(cov, max_abs(shift_finite(g, op, pz) - op_phi_finite(g, shift_finite(g, f, pz), phi)));
    }
    for (const Point e : {Point{1, 0}, Point{0, 1}}) {
      const PhaseFunction df = shift_finite(g, f, e) - f;
      diff = std::max(diff, max_abs(op_phi_finite(g, df, phi) - (shift_finite(g, op, e) - op)));
    }
    const Matrix a = random_matrix(n, rng);
    const PhaseFunction s = symbol_phi_finite(g, a, phi);
    cov_sym = std::max(cov_sym, max_abs(op_phi_finite(g, s, phi) - a));
  }
  r.add("op_unit", tag + "op(1) = I", unit_sym, tol);
  r.add("op_bijective", tag + "basis round trip", roundtrip, tol);
  r.add("op_surjective", tag + "op(sym(A)) = A", cov_sym, tol);
  r.add("covariance", tag + "alpha_z op(f) = op(alpha_z f)", cov, tol);
  r.add("difference_operators", tag + "finite differences commute with op", diff, tol);

  // Change of quantization between every pair of multipliers.
  double change = 0.0;
  Eigen::Index min_rank = static_cast<Eigen::Index>(m);
  for (const HomZN from : homs)
    for (const HomZN to : homs) {
      const Matrix t = change_of_quantization(g, from, to);
      Eigen::FullPivLU<Matrix> lu(t);
      min_rank = std::min(min_rank, lu.rank());
      const PhaseFunction f = random_function(m, rng);
      change = std::max(change, max_abs(op_phi_finite(g, t * f, to) - op_phi_finite(g, f, from)));
    }
  r.add("change_of_quantization", tag + "op^Phi'(T f) = op^Phi(f)", change, tol);
  r.add("change_of_quantization_rank", tag + "rank N^2", static_cast<double>(min_rank), static_cast<double>(m),
        static_cast<double>(m));

  // Convolution theorems in the symmetric convention Φ = 1/2.
  const HomZN weyl{g.half()};
  const Matrix a = random_matrix(n, rng), b = random_matrix(n, rng);
  const PhaseFunction f = random_function(m, rng);
  const PhaseFunction lhs = fsigma_finite(g, conv_op_op_finite(g, a, b));
  const PhaseFunction rhs = fw_finite(g, a, weyl).cwiseProduct(fw_finite(g, b, weyl));
  r.add("convolution_op_op", tag + "F_sigma(A*B) = F_W A F_W B", (lhs - rhs).cwiseAbs().maxCoeff(), tol);
  const PhaseFunction lhs2 = fw_finite(g, conv_fn_op_finite(g, f, a), weyl);
  const PhaseFunction rhs2 = fsigma_finite(g, f).cwiseProduct(fw_finite(g, a, weyl));
  r.add("convolution_fn_op", tag + "F_W(f*A) = F_sigma f F_W A", (lhs2 - rhs2).cwiseAbs().maxCoeff(), tol);
  const PhaseFunction mass = conv_op_op_finite(g, a, b);
  r.add("convolution_mass", tag + "(1/N) sum A*B = tr A tr B",
        std::abs(mass.sum() / static_cast<double>(n) - a.trace() * b.trace()), tol);
  return r;
}

}  // namespace qha::finite

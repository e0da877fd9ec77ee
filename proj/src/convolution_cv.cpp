#include "qha/convolution_cv.hpp"

#include <cmath>

#include "qha/fft.hpp"

namespace qha {

namespace {

// Flat index tables for k − a (a centered) and k − l over the position lattice.
struct IndexTables {
  std::vector<std::size_t> minus_centered;  // [k * m + a]
  std::vector<std::size_t> difference;      // [k * m + l]
};

IndexTables index_tables(const PhaseGrid& g) {
  const std::size_t d = g.d(), n = g.n(), m = g.position_size();
  const long half = static_cast<long>(n / 2);
  IndexTables t{std::vector<std::size_t>(m * m), std::vector<std::size_t>(m * m)};
  std::vector<std::size_t> dk(d), dl(d), out(d);
  for (std::size_t k = 0; k < m; ++k) {
    unravel(k, d, n, dk.data());
    for (std::size_t l = 0; l < m; ++l) {
      unravel(l, d, n, dl.data());
      for (std::size_t ax = 0; ax < d; ++ax)
        out[ax] = wrap_index(static_cast<long>(dk[ax]) - (static_cast<long>(dl[ax]) - half), n);
      t.minus_centered[k * m + l] = ravel(out.data(), d, n);
      for (std::size_t ax = 0; ax < d; ++ax)
        out[ax] = wrap_index(static_cast<long>(dk[ax]) - static_cast<long>(dl[ax]), n);
      t.difference[k * m + l] = ravel(out.data(), d, n);
    }
  }
  return t;
}

// (−1)^{Σ r} for a flat position index r.
double digit_parity(std::size_t r, std::size_t d, std::size_t n) {
  long s = 0;
  for (std::size_t ax = 0; ax < d; ++ax) {
    s += static_cast<long>(r % n);
    r /= n;
  }
  return s % 2 == 0 ? 1.0 : -1.0;
}

double binom(unsigned n, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

OperatorRep conv_fn_op(const Symbol& f, const OperatorRep& a, const Executor& exec) {
  const PhaseGrid& g = a.grid();
  if (!(f.grid() == g)) throw QhaError("conv_fn_op: grid mismatch");
  const std::size_t d = g.d(), n = g.n(), m = g.position_size();
  // fh[a][r] = Σ_b f(a, b) e^{2πi b̃·r/n} · cell
  ComplexVector fh(f.values());
  for (std::size_t s = 0; s < m; ++s)
    fft::transform_cube(std::span<Complex>(fh.data() + s * m, m), d, n, fft::Direction::backward);
  const double cell = g.cell_volume();
  for (std::size_t r = 0; r < m; ++r) {
    const double sgn = digit_parity(r, d, n) * cell;
    for (std::size_t s = 0; s < m; ++s) fh[s * m + r] *= sgn;
  }
  const IndexTables t = index_tables(g);
  const Matrix& am = a.matrix();
  Matrix out(am.rows(), am.cols());
  exec.for_each(m, [&](std::size_t k) {
    for (std::size_t l = 0; l < m; ++l) {
      const std::size_t r = t.difference[k * m + l];
      Complex acc{};
      for (std::size_t s = 0; s < m; ++s) {
        const Complex w = fh[s * m + r];
        if (w == Complex{}) continue;
        acc += w * am(static_cast<Eigen::Index>(t.minus_centered[k * m + s]),
                      static_cast<Eigen::Index>(t.minus_centered[l * m + s]));
      }
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = acc;
    }
  });
  return OperatorRep(g, std::move(out));
}

Symbol conv_op_op(const OperatorRep& a, const OperatorRep& b, const Executor& exec) {
  require_same_grid(a, b);
  const PhaseGrid& g = a.grid();
  const std::size_t d = g.d(), n = g.n(), m = g.position_size();
  const Matrix c = parity_conjugate(b).matrix();
  const Matrix& am = a.matrix();
  const IndexTables t = index_tables(g);
  Symbol out(g);
  // G_a(r) = Σ_{k−l ≡ r} A[l,k] C[k−ã, l−ã], then Σ_r G_a(r) e^{2πi b̃·r/n}.
  exec.for_each(m, [&](std::size_t s) {
    ComplexVector acc(m, Complex{});
    for (std::size_t k = 0; k < m; ++k) {
      const auto ck = static_cast<Eigen::Index>(t.minus_centered[k * m + s]);
      for (std::size_t l = 0; l < m; ++l)
        acc[t.difference[k * m + l]] += am(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) *
                                         c(ck, static_cast<Eigen::Index>(t.minus_centered[l * m + s]));
    }
    for (std::size_t r = 0; r < m; ++r) acc[r] *= digit_parity(r, d, n);
    fft::transform_cube(acc, d, n, fft::Direction::backward);
    std::copy(acc.begin(), acc.end(), out.values().begin() + static_cast<std::ptrdiff_t>(s * m));
  });
  return out;
}

Symbol reflect(const Symbol& f) {
  const PhaseGrid& g = f.grid();
  const std::size_t rank = g.axes(), n = g.n();
  Symbol out(g);
  std::vector<std::size_t> dig(rank);
  for (std::size_t i = 0; i < f.size(); ++i) {
    unravel(i, rank, n, dig.data());
    for (auto& v : dig) v = (n - v) % n;
    out[ravel(dig.data(), rank, n)] = f[i];
  }
  return out;
}

Symbol bessel_delta(const PhaseGrid& grid, unsigned power) {
  if (power == 0) throw QhaError("bessel_delta: power must be positive");
  Symbol m(grid);
  for (std::size_t i = 0; i < m.size(); ++i) {
    double r2 = 0.0;
    for (double c : grid.point(i).axes()) r2 += c * c;
    m[i] = std::pow(1.0 + r2, -static_cast<double>(power));
  }
  Symbol gsym = fourier_sigma(m) * std::pow(2.0 * kPi, -static_cast<double>(grid.d()));
  for (auto& v : gsym.values()) v = v.real();
  const Symbol r = reflect(gsym);
  for (std::size_t i = 0; i < gsym.size(); ++i) gsym[i] = 0.5 * (gsym[i].real() + r[i].real());
  return gsym;
}

CordesKernel cordes_kernel(const PhaseGrid& grid) {
  Symbol b = bessel_delta(grid, static_cast<unsigned>(grid.d()));
  // Hermitian part: drops the Nyquist lines, where W_w* is −W_{−w} on an even grid.
  const OperatorRep q = op_weyl(b);
  OperatorRep k = (q + q.adjoint()) * 0.5;
  const double tn = schatten_norm(k, 1.0);
  return CordesKernel{grid, std::move(k), tn, std::move(b)};
}

Symbol apply_bessel(const Symbol& f) {
  const double d = static_cast<double>(f.grid().d());
  return fourier_multiply(f, [d](const std::vector<double>& k) {
    double r2 = 0.0;
    for (double v : k) r2 += v * v;
    return Complex{std::pow(1.0 + r2, d), 0.0};
  });
}

OperatorRep apply_bessel(const DerivativeTable& table) {
  const std::size_t d = table.grid().d();
  if (table.max_order() < 2 * d) throw QhaError("apply_bessel: derivative table must reach order 2d");
  OperatorRep out(table.grid());
  // (1−Δ)^d = Σ_j C(d,j) (−1)^j Σ_{|β|=j} (j!/β!) ∂^{2β}; even orders carry no shift-convention sign.
  for (unsigned j = 0; j <= d; ++j) {
    const double cj = binom(static_cast<unsigned>(d), j) * (j % 2 == 0 ? 1.0 : -1.0);
    for (const auto& beta : multi_indices_of_order(2 * d, j)) {
      const double mult = cj * std::tgamma(j + 1.0) / beta.factorial();
      out = out + table.at(beta + beta).op * mult;
    }
  }
  return out;
}

double cordes_identity_defect(const Symbol& f, const CordesKernel& k) {
  const OperatorRep lhs = op_weyl(f);
  const OperatorRep rhs = conv_fn_op(apply_bessel(f), k.K);
  return (lhs.matrix() - rhs.matrix()).norm();
}

NormReport cv_bound(const Symbol& f, double p, const CordesKernel& k) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw QhaError("cv_bound: p must lie in [1, inf)");
  const double d = static_cast<double>(f.grid().d());
  const double c = std::pow(2.0 * kPi, d / p) * k.trace_norm;
  const double lhs = schatten_norm(op_weyl(f), p);
  const double rhs = c * sobolev_norm(f, static_cast<unsigned>(2 * f.grid().d()), p);
  NormReport r;
  auto& e = r.add("cv_bound", "Calderon-Vaillancourt, Schatten p", lhs, rhs * (1.0 + 1e-3));
  e.extra = {{"lhs", lhs}, {"rhs", rhs}, {"ratio", rhs > 0 ? lhs / rhs : 0.0}, {"c", c}, {"p", p}};
  return r;
}

NormReport reverse_cv_bound(const DerivativeTable& table, double p, const CordesKernel& k) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw QhaError("reverse_cv_bound: p must lie in [1, inf)");
  if (!(table.grid() == k.grid)) throw QhaError("reverse_cv_bound: grid mismatch");
  const std::size_t dd = table.grid().d();
  const double d = static_cast<double>(dd);
  const OperatorRep& a = table.at(MultiIndex(2 * dd)).op;
  const Symbol sym = symbol_of(a);
  const double c = std::pow(2.0 * kPi, d) * std::pow(2.0 * kPi, d / p) * k.trace_norm;
  const double lhs = lp_norm(sym, p);
  const double rhs = c * sobolev_norm(table, static_cast<unsigned>(2 * dd), p);
  NormReport r;
  auto& e = r.add("reverse_cv_bound", "reverse Calderon-Vaillancourt, Schatten p", lhs, rhs * (1.0 + 1e-3));
  e.extra = {{"lhs", lhs}, {"rhs", rhs}, {"ratio", rhs > 0 ? lhs / rhs : 0.0}, {"c", c}, {"p", p}};
  const Symbol via = conv_op_op(apply_bessel(table), k.K) * std::pow(2.0 * kPi, d);
  r.add("symbol_kernel_identity", "sym = P(A) * K", max_abs_diff(sym, via), 1e-4);
  return r;
}

}  // namespace qha

#include "qha/stft_modulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "qha/fft.hpp"

namespace qha {

WindowSpec WindowSpec::symbol(double width, std::optional<PhasePoint> center) {
  return {Kind::gaussian_symbol, width, std::move(center)};
}

WindowSpec WindowSpec::projector(double width, std::optional<PhasePoint> center) {
  return {Kind::gaussian_projector, width, std::move(center)};
}

namespace {

void check_width(const WindowSpec& s) {
  if (!(s.width > 0.0) || !std::isfinite(s.width)) throw QhaError("window: width must be positive");
}

void require_nonzero(const Symbol& g) {
  if (max_abs(g) == 0.0) throw QhaError("stft: zero window");
}

void require_nonzero(const OperatorRep& b) {
  if (b.matrix().cwiseAbs().maxCoeff() == 0.0) throw QhaError("stft: zero window");
}

std::vector<std::size_t> digits_of(std::size_t flat, std::size_t rank, std::size_t n) {
  std::vector<std::size_t> d(rank);
  unravel(flat, rank, n, d.data());
  return d;
}

// Stride subgrid plus one refinement pass around the per-w argmax nodes.
STFTData sample(const PhaseGrid& g, const std::function<ComplexVector(std::size_t)>& slice, const STFTOptions& opts,
                const Executor& exec) {
  if (opts.stride == 0) throw QhaError("stft: stride must be positive");
  const std::size_t rank = g.axes(), n = g.n();
  STFTData out{g, {}, {}};
  for (std::size_t z = 0; z < g.symbol_size(); ++z) {
    const auto dig = digits_of(z, rank, n);
    if (std::all_of(dig.begin(), dig.end(), [&](std::size_t v) { return v % opts.stride == 0; }))
      out.z_nodes.push_back(z);
  }
  auto evaluate = [&](const std::vector<std::size_t>& nodes) {
    std::vector<ComplexVector> s(nodes.size());
    exec.for_each(nodes.size(), [&](std::size_t i) { s[i] = slice(nodes[i]); });
    return s;
  };
  out.slices = evaluate(out.z_nodes);
  if (!opts.refine || opts.stride == 1) return out;

  std::set<std::size_t> peaks;
  for (std::size_t w = 0; w < g.symbol_size(); ++w) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.slices.size(); ++i)
      if (std::abs(out.slices[i][w]) > std::abs(out.slices[best][w])) best = i;
    peaks.insert(out.z_nodes[best]);
  }
  const std::set<std::size_t> have(out.z_nodes.begin(), out.z_nodes.end());
  std::set<std::size_t> extra;
  const std::size_t neighbours = ipow(3, rank);
  for (std::size_t p : peaks) {
    const auto base = digits_of(p, rank, n);
    std::vector<std::size_t> off(rank), dig(rank);
    for (std::size_t c = 0; c < neighbours; ++c) {
      unravel(c, rank, 3, off.data());
      for (std::size_t a = 0; a < rank; ++a)
        dig[a] = wrap_index(static_cast<long>(base[a]) + static_cast<long>(off[a]) - 1, n);
      const std::size_t z = ravel(dig.data(), rank, n);
      if (!have.count(z)) extra.insert(z);
    }
  }
  const std::vector<std::size_t> nodes(extra.begin(), extra.end());
  auto more = evaluate(nodes);
  out.z_nodes.insert(out.z_nodes.end(), nodes.begin(), nodes.end());
  for (auto& s : more) out.slices.push_back(std::move(s));
  return out;
}

}  // namespace

Symbol window_symbol(const WindowSpec& spec, const PhaseGrid& grid) {
  check_width(spec);
  if (spec.kind != WindowSpec::Kind::gaussian_symbol) throw QhaError("window_symbol: not a symbol window");
  return make_symbol(SymbolFamily::gaussian(spec.width, spec.center), grid);
}

OperatorRep window_operator(const WindowSpec& spec, const PhaseGrid& grid) {
  check_width(spec);
  if (spec.kind != WindowSpec::Kind::gaussian_projector) throw QhaError("window_operator: not a projector window");
  const std::size_t m = grid.position_size();
  Eigen::VectorXcd phi(static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) {
    double r2 = 0.0;
    for (double t : grid.position_node(k)) r2 += t * t;
    phi(static_cast<Eigen::Index>(k)) = std::exp(-0.5 * r2 / (spec.width * spec.width));
  }
  phi.normalize();
  if (spec.center) phi = weyl_operator(grid, *spec.center).matrix() * phi;
  return rank_one(grid, phi, phi);
}

Symbol matched_window(const OperatorRep& b) {
  return symbol_of(b) * std::pow(2.0 * kPi, -static_cast<double>(b.grid().d()));
}

STFTData stft_function(const Symbol& f, const Symbol& g, const STFTOptions& opts, const Executor& exec) {
  if (!(f.grid() == g.grid())) throw QhaError("stft_function: grid mismatch");
  require_nonzero(g);
  const PhaseGrid& grid = f.grid();
  const double scale = std::pow(2.0 * kPi, static_cast<double>(grid.d()));
  const Symbol gc = g.conj();
  return sample(
      grid,
      [&](std::size_t z) {
        const PhasePoint zp = grid.point(z);
        Symbol h = f.times(shift_function(gc, zp));
        return (fourier_sigma(h) * scale).values();
      },
      opts, exec);
}

STFTData stft_function(const Symbol& f, const WindowSpec& g, const STFTOptions& opts, const Executor& exec) {
  return stft_function(f, window_symbol(g, f.grid()), opts, exec);
}

OperatorRep op_modulate_lattice(const OperatorRep& a, const std::vector<long>& w) {
  const PhaseGrid& g = a.grid();
  const std::size_t rank = g.axes(), n = g.n();
  if (w.size() != rank) throw QhaError("op_modulate_lattice: wrong coordinate count");
  const Symbol fa = fourier_weyl(a);
  Symbol shifted(g);
  std::vector<std::size_t> dig(rank);
  for (std::size_t v = 0; v < fa.size(); ++v) {
    unravel(v, rank, n, dig.data());
    for (std::size_t ax = 0; ax < rank; ++ax) dig[ax] = wrap_index(static_cast<long>(dig[ax]) - w[ax], n);
    shifted[v] = fa[ravel(dig.data(), rank, n)];
  }
  return fourier_weyl_inverse(shifted);
}

STFTData stft_operator(const OperatorRep& a, const OperatorRep& b, const STFTOptions& opts, const Executor& exec) {
  require_same_grid(a, b);
  require_nonzero(b);
  const PhaseGrid& g = a.grid();
  const std::size_t d = g.d(), rank = g.axes(), n = g.n(), size = g.symbol_size();
  const long half = static_cast<long>(n / 2);
  // ⟨A, X⟩ = c_W Σ_v F_W A(v) conj(F_W X(v)) · cell, with F_W(γ_w α_z B)(v) = e^{iσ(z, v−w)} F_W B(v − w).
  const double scale = std::pow(2.0 * kPi, -static_cast<double>(d)) * g.cell_volume();
  const Symbol fa = fourier_weyl(a, 0.5, exec);
  const Symbol fb = fourier_weyl(b, 0.5, exec);
  // q(s) = F_W B at the lattice point with storage digits s + n/2, transformed once.
  ComplexVector qhat(size);
  std::vector<std::size_t> dig(rank);
  for (std::size_t sflat = 0; sflat < size; ++sflat) {
    unravel(sflat, rank, n, dig.data());
    for (auto& v : dig) v = (v + n / 2) % n;
    qhat[sflat] = fb[ravel(dig.data(), rank, n)];
  }
  fft::transform_cube(qhat, rank, n, fft::Direction::forward);
  std::vector<std::vector<long>> centered(size);
  for (std::size_t v = 0; v < size; ++v) {
    unravel(v, rank, n, dig.data());
    for (auto x : dig) centered[v].push_back(static_cast<long>(x) - half);
  }
  auto sigma_phase = [&](std::size_t z, std::size_t v) {
    long acc = 0;
    for (std::size_t ax = 0; ax < d; ++ax)
      acc += centered[v][ax] * centered[z][d + ax] - centered[z][ax] * centered[v][d + ax];
    return 2.0 * kPi * static_cast<double>(acc) / static_cast<double>(n);
  };
  return sample(
      g,
      [&](std::size_t z) {
        ComplexVector r(size);
        for (std::size_t v = 0; v < size; ++v) r[v] = fa[v] * std::polar(1.0, -sigma_phase(z, v));
        fft::transform_cube(r, rank, n, fft::Direction::forward);
        for (std::size_t k = 0; k < size; ++k) r[k] *= std::conj(qhat[k]);
        fft::transform_cube(r, rank, n, fft::Direction::backward);
        for (std::size_t w = 0; w < size; ++w)
          r[w] *= std::polar(scale / static_cast<double>(size), sigma_phase(z, w));
        return r;
      },
      opts, exec);
}

STFTData stft_operator(const OperatorRep& a, const WindowSpec& b, const STFTOptions& opts, const Executor& exec) {
  return stft_operator(a, window_operator(b, a.grid()), opts, exec);
}

double mixed_norm_inf1(const STFTData& f) {
  const std::size_t ws = f.grid.symbol_size();
  double total = 0.0;
  for (std::size_t w = 0; w < ws; ++w) {
    double sup = 0.0;
    for (const auto& slice : f.slices) sup = std::max(sup, std::abs(slice[w]));
    total += sup;
  }
  return total * f.grid.cell_volume();
}

double m_inf1_norm(const Symbol& f, const Symbol& g, const STFTOptions& opts, const Executor& exec) {
  return mixed_norm_inf1(stft_function(f, g, opts, exec));
}

double m_inf1_norm(const Symbol& f, const WindowSpec& g, const STFTOptions& opts, const Executor& exec) {
  return mixed_norm_inf1(stft_function(f, g, opts, exec));
}

double m_inf1_norm(const OperatorRep& a, const OperatorRep& b, const STFTOptions& opts, const Executor& exec) {
  return mixed_norm_inf1(stft_operator(a, b, opts, exec));
}

double m_inf1_norm(const OperatorRep& a, const WindowSpec& b, const STFTOptions& opts, const Executor& exec) {
  return mixed_norm_inf1(stft_operator(a, b, opts, exec));
}

double embedding_integral(std::size_t d) {
  return std::pow(4.0, static_cast<double>(d)) * (1.0 + 2.0 * static_cast<double>(d));
}

double window_derivative_constant(const Symbol& g) {
  const std::size_t rank = g.grid().axes();
  const unsigned top = static_cast<unsigned>(rank + 1);
  std::map<MultiIndex, double> l1;
  for (const auto& gamma : multi_indices_up_to(rank, top)) l1[gamma] = lp_norm(symbol_partial(g, gamma), 1.0);
  double best = 0.0;
  for (const auto& alpha : multi_indices_up_to(rank, top)) {
    double sum = 0.0;
    for (const auto& beta : multi_indices_up_to(rank, alpha.order()))
      if (beta.leq(alpha)) sum += binomial(alpha, beta) * l1.at(alpha - beta);
    best = std::max(best, sum);
  }
  return best;
}

void export_stft_csv(const STFTData& f, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw QhaError("cannot open '" + path.string() + "' for writing");
  os << grid_header(f.grid, "qha-stft") << "\nz,w,abs\n";
  for (std::size_t i = 0; i < f.z_nodes.size(); ++i)
    for (std::size_t w = 0; w < f.slices[i].size(); ++w)
      os << f.z_nodes[i] << ',' << w << ',' << format_double(std::abs(f.slices[i][w])) << '\n';
  if (!os) throw QhaError("write failed for '" + path.string() + "'");
}

}  // namespace qha

#include "qha/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "qha/analytic.hpp"
#include "qha/convolution_cv.hpp"
#include "qha/finite_qha.hpp"
#include "qha/fourier.hpp"
#include "qha/quantize.hpp"
#include "qha/stft_modulation.hpp"

namespace qha {
namespace {

struct Context {
  const SuiteConfig& config;
  PhaseGrid grid;
  Executor exec;
  std::mt19937_64 rng;

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  long uniform_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

  std::vector<long> lattice(long r) {
    std::vector<long> c(grid.axes());
    for (auto& v : c) v = uniform_int(-r, r);
    return c;
  }

  PhasePoint point(double r) {
    PhasePoint z = PhasePoint::zero(grid.d());
    for (auto& v : z.x) v = uniform(-r, r);
    for (auto& v : z.xi) v = uniform(-r, r);
    return z;
  }

  Symbol smooth_symbol(const PhaseGrid& g, int terms = 3) {
    Symbol f(g);
    for (int t = 0; t < terms; ++t) {
      const double w = uniform(0.95, 1.05);
      PhasePoint c = PhasePoint::zero(g.d());
      for (auto& v : c.x) v = uniform(-0.5, 0.5);
      for (auto& v : c.xi) v = uniform(-0.5, 0.5);
      const Complex a{uniform(-1, 1), uniform(-1, 1)};
      f = f + make_symbol(SymbolFamily::gaussian(w, c), g) * a;
    }
    return f;
  }
};

double fro(const OperatorRep& a, const OperatorRep& b) { return (a.matrix() - b.matrix()).norm(); }

Symbol constant(const PhaseGrid& g, Complex c) { return Symbol(g, ComplexVector(g.symbol_size(), c)); }

long lattice_radius(const PhaseGrid& g, long cap) { return std::min<long>(cap, static_cast<long>(g.n() / 4)); }

// Plain double sums used as cross-checks on small grids.
Symbol naive_fsigma(const Symbol& f) {
  const auto& g = f.grid();
  const double pref = std::pow(2.0 * kPi, -static_cast<double>(g.d())) * g.cell_volume();
  Symbol out(g);
  for (std::size_t w = 0; w < f.size(); ++w) {
    Complex acc{};
    for (std::size_t z = 0; z < f.size(); ++z) acc += f[z] * std::polar(1.0, symplectic_form(g.point(z), g.point(w)));
    out[w] = acc * pref;
  }
  return out;
}

Symbol naive_fw(const OperatorRep& a) {
  const auto& g = a.grid();
  Symbol out(g);
  for (std::size_t w = 0; w < out.size(); ++w)
    out[w] = (a.matrix() * weyl_operator(g, g.point(w)).matrix().adjoint()).trace();
  return out;
}

// Kernel quadrature M[k,l] = (1/n) Σ_j f((t_k + t_l)/2, ξ_j) e^{iξ_j (t_k − t_l)} for d = 1, with the
// midpoint value taken from the trigonometric interpolant of each frequency column.
OperatorRep weyl_kernel_quadrature(const Symbol& f) {
  const auto& g = f.grid();
  const std::size_t n = g.n();
  OperatorRep out(g);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      const long a = static_cast<long>(wrap_index(static_cast<long>(k) - static_cast<long>(l) + long(n / 2), n)) - long(n / 2);
      const double delta = static_cast<double>(a) * g.spacing();
      const double mid = g.position(k) - 0.5 * delta;
      Complex acc{};
      for (std::size_t j = 0; j < n; ++j) {
        Complex fv{};
        for (std::size_t i = 0; i < n; ++i) {
          Complex dk{};
          for (std::size_t b = 0; b < n; ++b)
            dk += std::polar(1.0, static_cast<double>(g.centered(b)) * g.dual_spacing() * (mid - g.position(i)));
          fv += f[i * n + j] * dk / static_cast<double>(n);
        }
        acc += fv * std::polar(1.0, g.momentum(j) * delta);
      }
      out.matrix()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = acc / static_cast<double>(n);
    }
  return out;
}

// Criterion-level suites.

void suite_algebra(Context& c, NormReport& r) {
  const PhaseGrid& g = c.grid;
  const Symbol f = c.smooth_symbol(g);
  const OperatorRep a = op_weyl(f);
  const OperatorRep b = OperatorRep::identity(g) + op_weyl(make_symbol(SymbolFamily::gaussian(), g)) * 0.1;

  DerivativeOptions fd;
  fd.scheme = DerivativeScheme::finite_diff;
  double agree = 0.0;
  double worst_ratio_dev = 0.0, ratio_lo = 1e300, ratio_hi = 0.0;
  const OperatorRep p = op_weyl(make_symbol(SymbolFamily::gaussian(), g));
  for (std::size_t j = 0; j < g.axes(); ++j) {
    const auto e = MultiIndex::unit(g.axes(), j);
    agree = std::max(agree, operator_norm(derivative(a, e, fd) - derivative(a, e)));
    DerivativeOptions coarse = fd, fine = fd;
    coarse.richardson_levels = fine.richardson_levels = 0;
    coarse.step = 0.05;
    fine.step = 0.025;
    const OperatorRep ref = derivative(p, e);
    const double ratio = operator_norm(derivative(p, e, coarse) - ref) / operator_norm(derivative(p, e, fine) - ref);
    ratio_lo = std::min(ratio_lo, ratio);
    ratio_hi = std::max(ratio_hi, ratio);
    worst_ratio_dev = std::max(worst_ratio_dev, std::abs(ratio - 4.0));
  }
  r.add("fd_commutator_agreement", "finite-difference and commutator derivatives", agree, 1e-5);
  auto& h = r.add("fd_halving_ratio", "second-order step halving", ratio_lo, 5.0, 3.0);
  h.extra = {{"min_ratio", ratio_lo}, {"max_ratio", ratio_hi}};
  r.add("fd_halving_ratio_max", "second-order step halving", ratio_hi, 5.0, 3.0);

  AlgebraOptions ao;
  ao.derivative = fd;
  r.merge(verify_derivative_algebra(a, b, ao));

  double inter = 0.0;
  for (const auto& alpha : multi_indices_up_to(g.axes(), 3)) {
    const double sign = alpha.order() % 2 == 0 ? 1.0 : -1.0;
    inter = std::max(inter, operator_norm(derivative(a, alpha) - op_weyl(symbol_partial(f, alpha)) * sign));
  }
  r.add("derivative_intertwining", "derivatives commute with quantization", inter, 1e-5);
}

void suite_fourier(Context& c, NormReport& r) {
  const PhaseGrid& g = c.grid;
  const long rad = lattice_radius(g, 20);
  double ccr = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto z = g.lattice_point(c.lattice(rad)), w = g.lattice_point(c.lattice(rad));
    const OperatorRep lhs = weyl_operator(g, z) * weyl_operator(g, w);
    const OperatorRep rhs = weyl_operator(g, z + w) * std::polar(1.0, 0.5 * symplectic_form(z, w));
    ccr = std::max(ccr, max_abs_diff(lhs, rhs));
  }
  r.add("ccr", "exponentiated canonical commutation relations", ccr, 1e-9).extra["pairs"] = 50;

  const OperatorRep a = op_weyl(c.smooth_symbol(g, 4));
  const bool fractional = g.n() >= 32;
  const char* coarse_note = "fractional shifts are unresolved for n < 32";
  double group = 0.0, group_frac = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto cz = c.lattice(lattice_radius(g, 10)), cw = c.lattice(lattice_radius(g, 10));
    const auto lz = g.lattice_point(cz), lw = g.lattice_point(cw);
    group = std::max(group, max_abs_diff(op_shift(op_shift(a, lw), lz), op_shift(a, lz + lw)));
    const auto u = c.point(0.5), v = c.point(0.5);
    if (fractional) group_frac = std::max(group_frac, max_abs_diff(op_shift(op_shift(a, v), u), op_shift(a, u + v)));
  }
  r.add("shift_group_law", "operator shifts form a group action", group, 1e-9);
  if (fractional)
    r.add("shift_group_law_fractional", "operator shifts form a group action", group_frac, 1e-9);
  else
    r.skip("shift_group_law_fractional", "operator shifts form a group action", coarse_note);

  const Symbol fa = fourier_weyl(a, 0.5, c.exec);
  const Symbol f = c.smooth_symbol(g);
  const Symbol ff = fourier_sigma(f);
  double fw_shift = 0.0, fw_mod = 0.0, fs_shift = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto z = g.lattice_point(c.lattice(lattice_radius(g, 12)));
    fw_shift = std::max(fw_shift, max_abs_diff(fourier_weyl(op_shift(a, z), 0.5, c.exec), modulate_function(fa, z)));
    const auto zm = g.lattice_point(c.lattice(lattice_radius(g, 3)));
    if (fractional)
      fw_mod = std::max(fw_mod, max_abs_diff(fourier_weyl(op_modulate(a, zm), 0.5, c.exec), shift_function(fa, zm)));
    fs_shift = std::max(fs_shift, max_abs_diff(fourier_sigma(shift_function(f, z)), modulate_function(ff, z)));
  }
  r.add("fw_shift_intertwining", "Fourier-Weyl transform of a shift", fw_shift, 1e-9);
  if (fractional)
    r.add("fw_modulation_intertwining", "Fourier-Weyl transform of a modulation", fw_mod, 1e-9);
  else
    r.skip("fw_modulation_intertwining", "Fourier-Weyl transform of a modulation", coarse_note);
  r.add("fsigma_shift_intertwining", "symplectic Fourier transform of a shift", fs_shift, 1e-9);
  r.add("fsigma_involution", "symplectic Fourier transform is self-inverse", max_abs_diff(fourier_sigma(ff), f), 1e-9);

  const auto prof = calibrate_normalization(g);
  const double expect = normalization(g.d()).fw_measure_prefactor;
  auto& cal = r.add("plancherel_calibration", "Plancherel constant", std::abs(prof.fw_measure_prefactor - expect) / expect, 1e-12);
  cal.extra["c_w"] = prof.fw_measure_prefactor;
  double planch = 0.0;
  for (int i = 0; i < 20; ++i) planch = std::max(planch, plancherel_defect(op_weyl(c.smooth_symbol(g, 4))));
  r.add("plancherel", "Plancherel identity", planch, 1e-8).extra["operators"] = 20;

  if (g.n() <= 16) {
    const Symbol s = c.smooth_symbol(g);
    r.add("naive_fsigma", "symplectic Fourier transform by direct summation", max_abs_diff(fourier_sigma(s), naive_fsigma(s)), 1e-10);
    const OperatorRep b = op_weyl(c.smooth_symbol(g, 4));
    r.add("naive_fw", "Fourier-Weyl transform by direct traces", max_abs_diff(fourier_weyl(b, 0.5, c.exec), naive_fw(b)), 1e-9);
  } else {
    r.skip("naive_fsigma", "symplectic Fourier transform by direct summation", "direct sums run for n <= 16");
    r.skip("naive_fw", "Fourier-Weyl transform by direct traces", "direct sums run for n <= 16");
  }
}

void suite_quantize(Context& c, NormReport& r) {
  const PhaseGrid& g = c.grid;
  if (g.d() == 1) {
    const PhaseGrid small(1, 16, g.period());
    const Symbol cs = make_symbol(SymbolFamily::cos_sin(), small);
    const Symbol rs = c.smooth_symbol(small);
    const double q = std::max(max_abs_diff(op_weyl(cs), weyl_kernel_quadrature(cs)),
                              max_abs_diff(op_weyl(rs), weyl_kernel_quadrature(rs)));
    r.add("kernel_quadrature", "Weyl quantization as a kernel integral", q, 1e-6).extra["n"] = 16;
  } else {
    r.skip("kernel_quadrature", "Weyl quantization as a kernel integral", "direct quadrature is implemented for d = 1");
  }
  r.add("quantize_unit", "quantization of the constant symbol", fro(op_weyl(constant(g, 1.0)), OperatorRep::identity(g)), 1e-8);
  double rt = 0.0;
  for (int i = 0; i < 5; ++i) {
    const Symbol f = c.smooth_symbol(g);
    rt = std::max(rt, max_abs_diff(symbol_of(op_weyl(f)), f));
  }
  r.add("symbol_round_trip", "dequantization inverts quantization", rt, 1e-8);
  const Symbol f = c.smooth_symbol(g);
  const OperatorRep kn = op_tau(f, 0.0);
  for (double tau : {-0.5, 0.25, 1.0}) {
    auto& e = r.add("n_tau_" + format_double(tau), "change of quantization", fro(op_tau(n_tau(f, tau), tau), kn), 1e-8);
    e.extra["tau"] = tau;
  }
}

struct EmbeddingConstants {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
};

EmbeddingConstants embedding_constants(const PhaseGrid& g, const Executor& exec) {
  EmbeddingConstants k;
  const Symbol window = window_symbol(WindowSpec::symbol(), g);
  const unsigned order = static_cast<unsigned>(2 * g.d() + 1);
  for (const auto& [name, f] : test_symbol_family(g)) {
    const double m_f = m_inf1_norm(f, window, {}, exec);
    double cb = 0.0;
    for (const auto& alpha : multi_indices_up_to(g.axes(), order)) cb = std::max(cb, max_abs(symbol_partial(f, alpha)));
    const OperatorRep a = op_weyl(f);
    const double m_a = m_inf1_norm(a, WindowSpec::projector(), {}, exec);
    const double ck = ck_norm(build_derivative_table(a, order, {}, exec), order);
    k.c1 = std::max(k.c1, max_abs(f) / m_f);
    k.c2 = std::max(k.c2, m_f / cb);
    k.c3 = std::max(k.c3, operator_norm(a) / m_a);
    k.c4 = std::max(k.c4, m_a / ck);
  }
  return k;
}

void suite_stft(Context& c, NormReport& r) {
  const PhaseGrid fine = c.grid;
  const PhaseGrid coarse(fine.d(), fine.n() / 2, fine.period());
  const EmbeddingConstants kc = embedding_constants(coarse, c.exec);
  const EmbeddingConstants kf = embedding_constants(fine, c.exec);
  const std::pair<const char*, std::pair<double, double>> rows[] = {
      {"embedding_sup_by_modulation", {kc.c1, kf.c1}},
      {"embedding_modulation_by_smooth", {kc.c2, kf.c2}},
      {"embedding_opnorm_by_modulation", {kc.c3, kf.c3}},
      {"embedding_op_modulation_by_smooth", {kc.c4, kf.c4}},
  };
  for (const auto& [name, v] : rows) {
    const double change = std::abs(v.second / v.first - 1.0);
    auto& e = r.add(name, "embedding chain constant", change, 0.2);
    e.extra = {{"coarse", v.first}, {"fine", v.second}, {"n_coarse", double(coarse.n())}, {"n_fine", double(fine.n())}};
    if (!std::isfinite(v.first) || !std::isfinite(v.second)) e.value = std::numeric_limits<double>::infinity();
  }
  const Symbol window = window_symbol(WindowSpec::symbol(), fine);
  auto& b = r.add("embedding_bound", "smooth symbols lie in the modulation space",
                  kf.c2, window_derivative_constant(window) * embedding_integral(fine.d()));
  b.extra["embedding_integral"] = embedding_integral(fine.d());
}

void suite_cv(Context& c, NormReport& r) {
  const PhaseGrid& g = c.grid;
  const CordesKernel k = cordes_kernel(g);
  const auto family = test_symbol_family(g);
  for (double p : {1.0, 2.0}) {
    double worst = 0.0;
    for (const auto& [name, f] : family) worst = std::max(worst, cv_bound(f, p, k).entries[0].extra.at("ratio"));
    auto& e = r.add("cv_bound_p" + format_double(p), "Schatten Calderon-Vaillancourt bound", worst, 1.0 + 1e-3);
    e.extra = {{"p", p}, {"max_ratio", worst}, {"symbols", double(family.size())}};
  }
  const unsigned order = static_cast<unsigned>(2 * g.d());
  double rev = 0.0, sym = 0.0, ident = 0.0;
  for (const auto& [name, f] : family)
    for (double p : {1.0, 2.0}) {
      const NormReport rr = reverse_cv_bound(build_derivative_table(op_weyl(f), order, {}, c.exec), p, k);
      rev = std::max(rev, rr.find("reverse_cv_bound")->extra.at("ratio"));
      sym = std::max(sym, rr.find("symbol_kernel_identity")->value);
    }
  r.add("reverse_cv_bound", "reverse Calderon-Vaillancourt bound", rev, 1.0 + 1e-3);
  r.add("reverse_symbol_kernel_identity", "symbol as Bessel-weighted convolution with K", sym, 1e-4);
  for (const auto& [name, f] : family) ident = std::max(ident, cordes_identity_defect(f, k));
  r.add("cordes_identity", "quantization as Bessel-weighted convolution with K", ident, 1e-5);

  const PhaseGrid refined(g.d(), 2 * g.n(), g.period());
  const double t_fine = cordes_kernel(refined).trace_norm;
  auto& t = r.add("cordes_trace_norm_refinement", "trace norm of the Cordes kernel", std::abs(t_fine / k.trace_norm - 1.0), 0.1);
  t.extra = {{"trace_norm", k.trace_norm}, {"trace_norm_refined", t_fine}, {"n", double(g.n())}, {"n_refined", double(refined.n())}};
}

void suite_finite(Context& c, NormReport& r) {
  for (std::int64_t n : c.config.moduli) {
    NormReport f = finite::exhaustive_verify(n, c.config.seed);
    for (auto& e : f.entries) e.name = "finite_N" + std::to_string(n) + "_" + e.name;
    r.merge(f);
  }
}

void suite_analytic(Context& c, NormReport& r) {
  const PhaseGrid& g = c.grid;
  const auto norms = symbol_derivative_norms(SymbolFamily::cos_sin(), g, 8);
  double dev = 0.0;
  for (const auto& [beta, v] : norms) dev = std::max(dev, std::abs(v - 1.0));
  r.add("cos_sin_derivative_sup", "unit derivative norms of cos(x)sin(xi)", dev, 1e-10).extra["derivatives"] = double(norms.size());
  const AnalyticityFit sf = analyticity_fit(norms);
  auto& fc = r.add("cos_sin_fit_constant", "factorial bound constant at R = 1", std::abs(sf.c_at(1.0) - 1.0), 1e-10);
  fc.extra = {{"C_at_1", sf.c_at(1.0)}, {"R", sf.R}, {"C", sf.C}};

  const OperatorRep a = op_weyl(make_symbol(SymbolFamily::cos_sin(), g));
  const AnalyticityFit of = analyticity_fit(operator_derivative_norms(build_derivative_table(a, 8, {}, c.exec)));
  auto& oe = r.add("operator_fit_radius", "quantized analytic symbols are analytic", of.success ? of.R : 0.0,
                   std::numeric_limits<double>::infinity(), 0.1 * sf.R * sf.R);
  oe.extra = {{"C", of.C}, {"S", of.R}, {"symbol_R", sf.R}};

  const OperatorRep b = OperatorRep::identity(g) + op_weyl(make_symbol(SymbolFamily::gaussian(), g)) * 0.2;
  const auto sb = series_coefficients(b, 4, c.exec);
  const auto inv = invert_series(sb, 4);
  double comp = 0.0;
  for (const auto& beta : multi_indices_up_to(g.axes(), 4)) {
    OperatorRep prod(g);
    for (const auto& alpha : multi_indices_up_to(g.axes(), beta.order()))
      if (alpha.leq(beta)) prod = prod + sb.at(alpha) * inv.at(beta - alpha);
    if (beta.order() == 0) prod = prod - OperatorRep::identity(g);
    comp = std::max(comp, operator_norm(prod));
  }
  r.add("series_inverse_composition", "inverse of a formal power series", comp, 1e-8);
  const auto direct = series_coefficients(OperatorRep(g, b.matrix().inverse()), 4, c.exec);
  double match = 0.0;
  for (const auto& [beta, op] : direct) match = std::max(match, operator_norm(op - inv.at(beta)));
  r.add("series_inverse_direct", "power series of the inverse operator", match, 1e-6);

  std::vector<double> dir(g.axes(), 1.0 / std::sqrt(double(g.axes())));
  auto at = [&](double t) {
    std::vector<double> z(dir);
    for (auto& v : z) v *= t;
    const PhasePoint p = PhasePoint::from_axes(z);
    return operator_norm(op_shift(b, p) - evaluate_series(sb, p, 2));
  };
  const double ratio = at(0.1) / at(0.05);
  r.add("taylor_remainder_ratio", "power series of the shifted operator", ratio, 10.0, 6.0);
}

using SuiteFn = void (*)(Context&, NormReport&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"algebra", suite_algebra}, {"fourier", suite_fourier}, {"quantize", suite_quantize}, {"stft", suite_stft},
      {"cv", suite_cv},           {"finite", suite_finite},   {"analytic", suite_analytic},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

void validate(const SuiteConfig& config) {
  if (config.d < 1 || config.d > 2) throw QhaError("d must be 1 or 2");
  if (config.n < 8 || config.n % 4 != 0) throw QhaError("n must be a multiple of 4 and at least 8");
  if (!(config.L > 0.0) || !std::isfinite(config.L)) throw QhaError("L must be positive");
  if (config.workers < 1) throw QhaError("workers must be at least 1");
  for (auto m : config.moduli)
    if (m < 3 || m % 2 == 0 || m > 13) throw QhaError("finite moduli must be odd and in [3, 13]");
  for (const auto& s : config.suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw QhaError("unknown suite: " + s);
}

std::vector<std::pair<std::string, Symbol>> test_symbol_family(const PhaseGrid& g) {
  auto at = [&](double x, double xi) {
    PhasePoint p = PhasePoint::zero(g.d());
    p.x[0] = x;
    p.xi[0] = xi;
    return p;
  };
  auto fam = [&](const SymbolFamily& s) { return make_symbol(s, g); };
  std::vector<std::pair<std::string, Symbol>> out;
  out.emplace_back("gaussian_1", fam(SymbolFamily::gaussian(1.0)));
  out.emplace_back("gaussian_0.8", fam(SymbolFamily::gaussian(0.8)));
  out.emplace_back("gaussian_0.7_shifted", fam(SymbolFamily::gaussian(0.7, at(1.0, -1.0))));
  out.emplace_back("gaussian_0.9_shifted", fam(SymbolFamily::gaussian(0.9, at(-1.0, 0.5))));
  out.emplace_back("gaussian_0.6", fam(SymbolFamily::gaussian(0.6)));
  out.emplace_back("cos_sin_windowed", fam(SymbolFamily::cos_sin()).times(fam(SymbolFamily::gaussian(1.0))));
  out.emplace_back("cos_sin_shifted_window",
                   fam(SymbolFamily::cos_sin()).times(fam(SymbolFamily::gaussian(0.9, at(0.5, -0.5)))));
  out.emplace_back("plane_wave_windowed", fam(SymbolFamily::plane_wave(at(0.5, 0.25))).times(fam(SymbolFamily::gaussian(1.0))));
  out.emplace_back("plane_wave_shifted_window",
                   fam(SymbolFamily::plane_wave(at(1.0, -0.5))).times(fam(SymbolFamily::gaussian(0.8, at(0.5, 0.5)))));
  out.emplace_back("gaussian_pair", fam(SymbolFamily::gaussian(1.0)) + fam(SymbolFamily::gaussian(0.7, at(1.5, 0.0))) * Complex(0.0, 0.5));
  return out;
}

NormReport run_suite(const SuiteConfig& config) {
  validate(config);
  set_default_workers(config.workers);
  const auto start = std::chrono::steady_clock::now();
  NormReport report;
  Context ctx{config, PhaseGrid(config.d, config.n, config.L), Executor(config.workers), std::mt19937_64(config.seed)};
  std::vector<std::string> ran;
  for (const auto& [name, fn] : registry()) {
    if (!config.suites.empty() && std::find(config.suites.begin(), config.suites.end(), name) == config.suites.end())
      continue;
    ctx.rng.seed(config.seed);
    const auto suite_start = std::chrono::steady_clock::now();
    NormReport part;
    try {
      fn(ctx, part);
    } catch (const std::exception& e) {
      part.add("suite_error", "plumbing", 1.0, 0.0).note = e.what();
    }
    for (auto& e : part.entries) {
      auto it = config.tolerance_overrides.find(e.name);
      if (it != config.tolerance_overrides.end()) e.tolerance = it->second;
      report.metadata["suite_of"][e.name] = name;
    }
    report.merge(part);
    report.metadata["suite_seconds"][name] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start).count();
    ran.push_back(name);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.metadata["config"] = {{"d", config.d}, {"n", config.n}, {"L", config.L}, {"moduli", config.moduli},
                               {"suites", ran}, {"workers", config.workers}, {"seed", config.seed},
                               {"tolerance_overrides", config.tolerance_overrides}};
  report.metadata["wall_time_seconds"] = wall;
  report.metadata["versions"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                               std::to_string(EIGEN_MINOR_VERSION)},
                                 {"compiler", __VERSION__}};
  return report;
}

}  // namespace qha

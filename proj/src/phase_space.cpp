#include "qha/phase_space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qha/fft.hpp"

namespace qha {

// ---------------------------------------------------------------- PhasePoint

PhasePoint PhasePoint::from_axes(const std::vector<double>& coords) {
  if (coords.size() % 2 != 0) throw QhaError("PhasePoint: odd number of axes");
  const std::size_t d = coords.size() / 2;
  return {std::vector<double>(coords.begin(), coords.begin() + d), std::vector<double>(coords.begin() + d, coords.end())};
}

std::vector<double> PhasePoint::axes() const {
  std::vector<double> v(x);
  v.insert(v.end(), xi.begin(), xi.end());
  return v;
}

double PhasePoint::norm() const {
  double s = 0.0;
  for (double v : x) s += v * v;
  for (double v : xi) s += v * v;
  return std::sqrt(s);
}

bool PhasePoint::is_zero() const {
  for (double v : x)
    if (v != 0.0) return false;
  for (double v : xi)
    if (v != 0.0) return false;
  return true;
}

PhasePoint PhasePoint::operator+(const PhasePoint& o) const {
  if (o.dim() != dim()) throw QhaError("PhasePoint: dimension mismatch");
  PhasePoint r = *this;
  for (std::size_t j = 0; j < dim(); ++j) {
    r.x[j] += o.x[j];
    r.xi[j] += o.xi[j];
  }
  return r;
}

PhasePoint PhasePoint::operator-(const PhasePoint& o) const { return *this + (-o); }

PhasePoint PhasePoint::operator-() const { return *this * -1.0; }

PhasePoint PhasePoint::operator*(double s) const {
  PhasePoint r = *this;
  for (auto& v : r.x) v *= s;
  for (auto& v : r.xi) v *= s;
  return r;
}

// ---------------------------------------------------------------- PhaseGrid

PhaseGrid::PhaseGrid(std::size_t d, std::size_t n, double period) : d_(d), n_(n), period_(period) {
  if (d < 1) throw QhaError("PhaseGrid: d must be >= 1");
  if (n < 4 || n % 2 != 0) throw QhaError("PhaseGrid: n must be even and >= 4");
  if (!(period > 0.0) || !std::isfinite(period)) throw QhaError("PhaseGrid: L must be positive and finite");
}

double PhaseGrid::cell_volume() const {
  return std::pow(2.0 * kPi / static_cast<double>(n_), static_cast<double>(d_));
}

PhasePoint PhaseGrid::point(std::size_t flat) const {
  std::vector<std::size_t> digits(axes());
  unravel(flat, axes(), n_, digits.data());
  PhasePoint z = PhasePoint::zero(d_);
  for (std::size_t j = 0; j < d_; ++j) {
    z.x[j] = position(digits[j]);
    z.xi[j] = momentum(digits[d_ + j]);
  }
  return z;
}

PhasePoint PhaseGrid::lattice_point(const std::vector<long>& c) const {
  if (c.size() != axes()) throw QhaError("lattice_point: wrong coordinate count");
  PhasePoint z = PhasePoint::zero(d_);
  for (std::size_t j = 0; j < d_; ++j) {
    z.x[j] = static_cast<double>(c[j]) * spacing();
    z.xi[j] = static_cast<double>(c[d_ + j]) * dual_spacing();
  }
  return z;
}

std::vector<double> PhaseGrid::position_node(std::size_t flat) const {
  std::vector<std::size_t> digits(d_);
  unravel(flat, d_, n_, digits.data());
  std::vector<double> t(d_);
  for (std::size_t j = 0; j < d_; ++j) t[j] = position(digits[j]);
  return t;
}

// ---------------------------------------------------------------- Symbol

Symbol::Symbol(PhaseGrid grid) : grid_(grid), values_(grid.symbol_size(), Complex{}) {}

Symbol::Symbol(PhaseGrid grid, ComplexVector values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.symbol_size()) throw QhaError("Symbol: value count does not match grid");
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw QhaError("Symbol: non-finite value");
}

namespace {
void require_same_grid(const Symbol& a, const Symbol& b) {
  if (!(a.grid() == b.grid())) throw QhaError("Symbol: grid mismatch");
}
}  // namespace

Symbol Symbol::operator+(const Symbol& o) const {
  require_same_grid(*this, o);
  Symbol r = *this;
  for (std::size_t i = 0; i < size(); ++i) r.values_[i] += o.values_[i];
  return r;
}

Symbol Symbol::operator-(const Symbol& o) const {
  require_same_grid(*this, o);
  Symbol r = *this;
  for (std::size_t i = 0; i < size(); ++i) r.values_[i] -= o.values_[i];
  return r;
}

Symbol Symbol::operator*(Complex s) const {
  Symbol r = *this;
  for (auto& v : r.values_) v *= s;
  return r;
}

Symbol Symbol::times(const Symbol& o) const {
  require_same_grid(*this, o);
  Symbol r = *this;
  for (std::size_t i = 0; i < size(); ++i) r.values_[i] *= o.values_[i];
  return r;
}

Symbol Symbol::conj() const {
  Symbol r = *this;
  for (auto& v : r.values_) v = std::conj(v);
  return r;
}

double max_abs_diff(const Symbol& a, const Symbol& b) {
  require_same_grid(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const Symbol& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double lp_norm(const Symbol& f, double p) {
  if (p < 1.0) throw QhaError("lp_norm: p must be >= 1");
  if (std::isinf(p)) return max_abs(f);
  double s = 0.0;
  for (const auto& v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

// ---------------------------------------------------------------- operations

double symplectic_form(const PhasePoint& z, const PhasePoint& w) {
  if (z.dim() != w.dim()) throw QhaError("symplectic_form: dimension mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < z.dim(); ++j) s += w.x[j] * z.xi[j] - z.x[j] * w.xi[j];
  return s;
}

Symbol fourier_multiply(const Symbol& f, const std::function<Complex(const std::vector<double>&)>& m) {
  const PhaseGrid& g = f.grid();
  const std::size_t rank = g.axes(), n = g.n();
  ComplexVector data = f.values();
  fft::transform_cube(data, rank, n, fft::Direction::forward);
  std::vector<std::size_t> digits(rank);
  std::vector<double> k(rank);
  for (std::size_t flat = 0; flat < data.size(); ++flat) {
    unravel(flat, rank, n, digits.data());
    for (std::size_t a = 0; a < rank; ++a)
      k[a] = 2.0 * kPi * static_cast<double>(centered_frequency(digits[a], n)) / g.axis_period(a);
    data[flat] *= m(k);
  }
  fft::transform_cube(data, rank, n, fft::Direction::backward);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
  return Symbol(g, std::move(data));
}

Symbol shift_function(const Symbol& f, const PhasePoint& z) {
  const PhaseGrid& g = f.grid();
  if (z.dim() != g.d()) throw QhaError("shift_function: dimension mismatch");
  if (z.is_zero()) return f;
  const auto offsets = z.axes();
  const std::size_t rank = g.axes(), n = g.n();

  std::vector<long> nodes(rank);
  bool on_lattice = true;
  for (std::size_t a = 0; a < rank; ++a) {
    const double r = offsets[a] / g.axis_spacing(a);
    const double rr = std::nearbyint(r);
    if (std::abs(r - rr) > 1e-12) on_lattice = false;
    nodes[a] = static_cast<long>(rr);
  }
  if (on_lattice) {
    Symbol out(g);
    std::vector<std::size_t> digits(rank);
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
      unravel(flat, rank, n, digits.data());
      for (std::size_t a = 0; a < rank; ++a) digits[a] = wrap_index(static_cast<long>(digits[a]) - nodes[a], n);
      out[flat] = f[ravel(digits.data(), rank, n)];
    }
    return out;
  }
  return fourier_multiply(f, [&](const std::vector<double>& k) {
    double phase = 0.0;
    for (std::size_t a = 0; a < rank; ++a) phase -= k[a] * offsets[a];
    return std::polar(1.0, phase);
  });
}

Symbol modulate_function(const Symbol& f, const PhasePoint& z) {
  const PhaseGrid& g = f.grid();
  if (z.dim() != g.d()) throw QhaError("modulate_function: dimension mismatch");
  if (z.is_zero()) return f;
  Symbol out = f;
  for (std::size_t flat = 0; flat < f.size(); ++flat)
    out[flat] *= std::polar(1.0, symplectic_form(z, g.point(flat)));
  return out;
}

Symbol symbol_partial(const Symbol& f, const MultiIndex& alpha) {
  if (alpha.axes() != f.grid().axes()) throw QhaError("symbol_partial: multi-index has wrong length");
  if (alpha.order() == 0) return f;
  return fourier_multiply(f, [&](const std::vector<double>& k) {
    Complex m{1.0, 0.0};
    for (std::size_t a = 0; a < k.size(); ++a)
      for (unsigned e = 0; e < alpha[a]; ++e) m *= kI * k[a];
    return m;
  });
}

Symbol convolve(const Symbol& f, const Symbol& g) {
  require_same_grid(f, g);
  const PhaseGrid& grid = f.grid();
  const std::size_t rank = grid.axes(), n = grid.n();
  ComplexVector a = f.values(), b = g.values();
  fft::transform_cube(a, rank, n, fft::Direction::forward);
  fft::transform_cube(b, rank, n, fft::Direction::forward);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  fft::transform_cube(a, rank, n, fft::Direction::backward);
  const double scale = grid.cell_volume() / static_cast<double>(a.size());
  // Storage index i has centered coordinate i - n/2, so the cyclic product
  // lands at offset n/2 per axis.
  Symbol out(grid);
  std::vector<std::size_t> digits(rank);
  for (std::size_t flat = 0; flat < a.size(); ++flat) {
    unravel(flat, rank, n, digits.data());
    for (auto& dgt : digits) dgt = (dgt + n / 2) % n;
    out[flat] = a[ravel(digits.data(), rank, n)] * scale;
  }
  return out;
}

// ---------------------------------------------------------------- families

SymbolFamily SymbolFamily::gaussian(double width, std::optional<PhasePoint> center) {
  SymbolFamily f;
  f.name = "gaussian";
  f.width = width;
  f.center = std::move(center);
  return f;
}

SymbolFamily SymbolFamily::cos_sin() {
  SymbolFamily f;
  f.name = "cos_sin";
  return f;
}

SymbolFamily SymbolFamily::plane_wave(PhasePoint frequency) {
  SymbolFamily f;
  f.name = "plane_wave";
  f.frequency = std::move(frequency);
  return f;
}

SymbolFamily SymbolFamily::bump(double radius, std::optional<PhasePoint> center) {
  SymbolFamily f;
  f.name = "bump";
  f.width = radius;
  f.center = std::move(center);
  return f;
}

SymbolFamily SymbolFamily::imported(std::filesystem::path path) {
  SymbolFamily f;
  f.name = "imported";
  f.source = std::move(path);
  return f;
}

namespace {

// m-th derivative of e^{-u²/(2s²)}: (−1/s)^m He_m(u/s) e^{-u²/(2s²)}.
double gaussian_derivative(double u, double s, unsigned m) {
  const double x = u / s;
  double h0 = 1.0, h1 = x;
  double he = m == 0 ? h0 : h1;
  for (unsigned k = 1; k < m; ++k) {
    const double h2 = x * h1 - k * h0;
    h0 = h1;
    h1 = h2;
    he = h2;
  }
  return std::pow(-1.0 / s, static_cast<double>(m)) * he * std::exp(-0.5 * x * x);
}

}  // namespace

Complex evaluate_family(const SymbolFamily& family, const PhasePoint& z, const MultiIndex& beta) {
  const std::size_t d = z.dim();
  const MultiIndex b = beta.axes() == 0 ? MultiIndex(2 * d) : beta;
  if (b.axes() != 2 * d) throw QhaError("evaluate_family: multi-index has wrong length");
  const auto coords = z.axes();
  if (family.name == "gaussian") {
    const auto c = family.center ? family.center->axes() : std::vector<double>(2 * d, 0.0);
    double v = family.amplitude;
    for (std::size_t a = 0; a < 2 * d; ++a) v *= gaussian_derivative(coords[a] - c[a], family.width, b[a]);
    return v;
  }
  if (family.name == "cos_sin") {
    double v = family.amplitude;
    for (std::size_t j = 0; j < d; ++j) {
      v *= std::cos(z.x[j] + 0.5 * kPi * b[j]);
      v *= std::sin(z.xi[j] + 0.5 * kPi * b[d + j]);
    }
    return v;
  }
  if (family.name == "plane_wave") {
    if (!family.frequency) throw QhaError("plane_wave: frequency not set");
    const PhasePoint& k = *family.frequency;
    Complex v = family.amplitude * std::polar(1.0, symplectic_form(k, z));
    for (std::size_t j = 0; j < d; ++j) {
      for (unsigned e = 0; e < b[j]; ++e) v *= kI * k.xi[j];
      for (unsigned e = 0; e < b[d + j]; ++e) v *= -kI * k.x[j];
    }
    return v;
  }
  if (family.name == "bump") {
    if (b.order() != 0) throw QhaError("bump: closed-form derivatives not available");
    const auto c = family.center ? family.center->axes() : std::vector<double>(2 * d, 0.0);
    double r2 = 0.0;
    for (std::size_t a = 0; a < 2 * d; ++a) r2 += (coords[a] - c[a]) * (coords[a] - c[a]);
    const double q = r2 / (family.width * family.width);
    return q < 1.0 ? family.amplitude * std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
  }
  throw QhaError("evaluate_family: no closed form for family '" + family.name + "'");
}

Symbol sample_family_derivative(const SymbolFamily& family, const MultiIndex& beta, const PhaseGrid& grid) {
  Symbol out(grid);
  for (std::size_t flat = 0; flat < out.size(); ++flat) out[flat] = evaluate_family(family, grid.point(flat), beta);
  return out;
}

Symbol make_symbol(const SymbolFamily& family, const PhaseGrid& grid) {
  static const std::vector<std::string> known{"gaussian", "cos_sin", "plane_wave", "bump", "imported"};
  if (std::find(known.begin(), known.end(), family.name) == known.end())
    throw QhaError("make_symbol: unknown family '" + family.name + "'");
  if (family.name == "imported") {
    Symbol s = import_symbol_csv(family.source);
    if (!(s.grid() == grid)) throw QhaError("make_symbol: imported symbol lives on a different grid");
    return s;
  }
  return sample_family_derivative(family, MultiIndex(grid.axes()), grid);
}

// ---------------------------------------------------------------- CSV

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw QhaError("malformed number '" + std::string(s) + "'");
  return v;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::size_t parse_size(std::string_view s) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw QhaError("malformed integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

PhaseGrid parse_grid_header(const std::string& line, std::string_view tag) {
  const std::string prefix = "# " + std::string(tag) + " ";
  if (line.rfind(prefix, 0) != 0) throw QhaError("missing '" + prefix + "' header");
  std::optional<std::size_t> d, n;
  std::optional<double> L;
  for (auto tok : split(std::string_view(line).substr(prefix.size()), ' ')) {
    if (tok.empty()) continue;
    auto eq = tok.find('=');
    if (eq == std::string_view::npos) throw QhaError("malformed header token '" + std::string(tok) + "'");
    auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "d") d = parse_size(val);
    else if (key == "n") n = parse_size(val);
    else if (key == "L") L = parse_double(val);
    else throw QhaError("unknown header key '" + std::string(key) + "'");
  }
  if (!d || !n || !L) throw QhaError("header must define d, n and L");
  return PhaseGrid(*d, *n, *L);
}

std::string grid_header(const PhaseGrid& g, std::string_view tag) {
  return "# " + std::string(tag) + " d=" + std::to_string(g.d()) + " n=" + std::to_string(g.n()) +
         " L=" + format_double(g.period());
}

void export_symbol_csv(const Symbol& f, std::ostream& os) {
  const PhaseGrid& g = f.grid();
  os << grid_header(g, "qha-symbol") << '\n';
  std::vector<std::size_t> digits(g.axes());
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    unravel(flat, g.axes(), g.n(), digits.data());
    for (auto dgt : digits) os << dgt << ',';
    os << format_double(f[flat].real()) << ',' << format_double(f[flat].imag()) << '\n';
  }
}

Symbol import_symbol_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw QhaError("symbol csv: empty input");
  const PhaseGrid g = parse_grid_header(line, "qha-symbol");
  const std::size_t rank = g.axes();
  ComplexVector values(g.symbol_size());
  std::vector<bool> seen(values.size(), false);
  std::vector<std::size_t> digits(rank);
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != rank + 2) throw QhaError("symbol csv: row has wrong field count: " + line);
    for (std::size_t a = 0; a < rank; ++a) {
      digits[a] = parse_size(fields[a]);
      if (digits[a] >= g.n()) throw QhaError("symbol csv: index out of range: " + line);
    }
    const std::size_t flat = ravel(digits.data(), rank, g.n());
    if (seen[flat]) throw QhaError("symbol csv: duplicate row: " + line);
    seen[flat] = true;
    values[flat] = {parse_double(fields[rank]), parse_double(fields[rank + 1])};
    ++rows;
  }
  if (rows != values.size()) throw QhaError("symbol csv: expected " + std::to_string(values.size()) + " rows");
  return Symbol(g, std::move(values));
}

void export_symbol_csv(const Symbol& f, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw QhaError("cannot open '" + path.string() + "' for writing");
  export_symbol_csv(f, os);
  if (!os) throw QhaError("write failed for '" + path.string() + "'");
}

Symbol import_symbol_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw QhaError("cannot open '" + path.string() + "'");
  try {
    return import_symbol_csv(is);
  } catch (const QhaError& e) {
    throw QhaError(path.string() + ": " + e.what());
  }
}

}  // namespace qha

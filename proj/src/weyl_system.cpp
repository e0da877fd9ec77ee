#include "qha/weyl_system.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qha {

OperatorRep::OperatorRep(PhaseGrid grid)
    : grid_(grid),
      matrix_(Matrix::Zero(static_cast<Eigen::Index>(grid.position_size()),
                           static_cast<Eigen::Index>(grid.position_size()))) {}

OperatorRep::OperatorRep(PhaseGrid grid, Matrix matrix) : grid_(grid), matrix_(std::move(matrix)) {
  const auto m = static_cast<Eigen::Index>(grid_.position_size());
  if (matrix_.rows() != m || matrix_.cols() != m) throw QhaError("OperatorRep: matrix size does not match grid");
  if (!matrix_.allFinite()) throw QhaError("OperatorRep: non-finite entry");
}

OperatorRep OperatorRep::identity(const PhaseGrid& grid) {
  const auto m = static_cast<Eigen::Index>(grid.position_size());
  return OperatorRep(grid, Matrix::Identity(m, m));
}

void require_same_grid(const OperatorRep& a, const OperatorRep& b) {
  if (!(a.grid() == b.grid())) throw QhaError("OperatorRep: grid mismatch");
}

OperatorRep OperatorRep::operator+(const OperatorRep& o) const {
  require_same_grid(*this, o);
  return OperatorRep(grid_, matrix_ + o.matrix_);
}

OperatorRep OperatorRep::operator-(const OperatorRep& o) const {
  require_same_grid(*this, o);
  return OperatorRep(grid_, matrix_ - o.matrix_);
}

OperatorRep OperatorRep::operator*(const OperatorRep& o) const {
  require_same_grid(*this, o);
  return OperatorRep(grid_, matrix_ * o.matrix_);
}

OperatorRep OperatorRep::operator*(Complex s) const { return OperatorRep(grid_, matrix_ * s); }

OperatorRep OperatorRep::adjoint() const { return OperatorRep(grid_, matrix_.adjoint()); }

double max_abs_diff(const OperatorRep& a, const OperatorRep& b) {
  require_same_grid(a, b);
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

namespace {

// First column of the 1-D circulant translation by x: s[r] = (1/n) Σ_m e^{iκ_m(rh − x)}.
ComplexVector translation_stencil(const PhaseGrid& grid, double x) {
  const std::size_t n = grid.n();
  const double h = grid.spacing();
  ComplexVector s(n, Complex{});
  const double r = x / h;
  const double rr = std::nearbyint(r);
  if (std::abs(r - rr) <= 1e-12) {
    s[wrap_index(static_cast<long>(rr), n)] = 1.0;
    return s;
  }
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    for (std::size_t m = 0; m < n; ++m) {
      const double kappa = 2.0 * kPi * static_cast<double>(centered_frequency(m, n)) / grid.period();
      acc += std::polar(1.0, kappa * (static_cast<double>(k) * h - x));
    }
    s[k] = acc / static_cast<double>(n);
  }
  return s;
}

}  // namespace

Matrix translation_matrix(const PhaseGrid& grid, const std::vector<double>& x) {
  const std::size_t d = grid.d(), n = grid.n(), m = grid.position_size();
  if (x.size() != d) throw QhaError("translation_matrix: dimension mismatch");
  std::vector<ComplexVector> stencils;
  for (double xa : x) stencils.push_back(translation_stencil(grid, xa));
  Matrix t(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<std::size_t> dk(d), dl(d);
  for (std::size_t k = 0; k < m; ++k) {
    unravel(k, d, n, dk.data());
    for (std::size_t l = 0; l < m; ++l) {
      unravel(l, d, n, dl.data());
      Complex v{1.0, 0.0};
      for (std::size_t a = 0; a < d; ++a)
        v *= stencils[a][wrap_index(static_cast<long>(dk[a]) - static_cast<long>(dl[a]), n)];
      t(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = v;
    }
  }
  return t;
}

Eigen::VectorXcd modulation_diagonal(const PhaseGrid& grid, const std::vector<double>& xi) {
  if (xi.size() != grid.d()) throw QhaError("modulation_diagonal: dimension mismatch");
  const std::size_t m = grid.position_size();
  Eigen::VectorXcd v(static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const auto t = grid.position_node(k);
    double phase = 0.0;
    for (std::size_t a = 0; a < t.size(); ++a) phase += xi[a] * t[a];
    v(static_cast<Eigen::Index>(k)) = std::polar(1.0, phase);
  }
  return v;
}

OperatorRep weyl_operator(const PhaseGrid& grid, const PhasePoint& z, double tau) {
  if (z.dim() != grid.d()) throw QhaError("weyl_operator: dimension mismatch");
  if (!std::isfinite(tau)) throw QhaError("weyl_operator: tau must be finite");
  double xxi = 0.0;
  for (std::size_t a = 0; a < z.dim(); ++a) xxi += z.x[a] * z.xi[a];
  Matrix w = modulation_diagonal(grid, z.xi).asDiagonal() * translation_matrix(grid, z.x);
  w *= std::polar(1.0, -tau * xxi);
  return OperatorRep(grid, std::move(w));
}

OperatorRep op_shift(const OperatorRep& a, const PhasePoint& z, double tau) {
  const OperatorRep w = weyl_operator(a.grid(), z, tau);
  return OperatorRep(a.grid(), w.matrix() * a.matrix() * w.matrix().adjoint());
}

OperatorRep op_shift_lattice(const OperatorRep& a, const std::vector<long>& c) {
  const PhaseGrid& g = a.grid();
  const std::size_t d = g.d(), n = g.n(), m = g.position_size();
  if (c.size() != 2 * d) throw QhaError("op_shift_lattice: wrong coordinate count");
  // α_z(A)[k,l] = e^{2πi b·(k−l)/n} A[k−a, l−a]
  std::vector<std::size_t> src(m);
  std::vector<double> phase(m);
  std::vector<std::size_t> dig(d);
  for (std::size_t k = 0; k < m; ++k) {
    unravel(k, d, n, dig.data());
    double ph = 0.0;
    for (std::size_t ax = 0; ax < d; ++ax) {
      ph += 2.0 * kPi * static_cast<double>(c[d + ax]) * static_cast<double>(dig[ax]) / static_cast<double>(n);
      dig[ax] = wrap_index(static_cast<long>(dig[ax]) - c[ax], n);
    }
    src[k] = ravel(dig.data(), d, n);
    phase[k] = ph;
  }
  Matrix out(a.matrix().rows(), a.matrix().cols());
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l)
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
          std::polar(1.0, phase[k] - phase[l]) *
          a.matrix()(static_cast<Eigen::Index>(src[k]), static_cast<Eigen::Index>(src[l]));
  return OperatorRep(g, std::move(out));
}

OperatorRep op_modulate(const OperatorRep& a, const PhasePoint& z) {
  const OperatorRep w = weyl_operator(a.grid(), z * 0.5, 0.5);
  return OperatorRep(a.grid(), w.matrix() * a.matrix() * w.matrix());
}

std::vector<std::size_t> parity_permutation(const PhaseGrid& grid) {
  const std::size_t d = grid.d(), n = grid.n(), m = grid.position_size();
  std::vector<std::size_t> perm(m), dig(d);
  for (std::size_t k = 0; k < m; ++k) {
    unravel(k, d, n, dig.data());
    for (auto& v : dig) v = (n - v) % n;
    perm[k] = ravel(dig.data(), d, n);
  }
  return perm;
}

OperatorRep parity_conjugate(const OperatorRep& a) {
  const auto perm = parity_permutation(a.grid());
  const std::size_t m = perm.size();
  Matrix out(a.matrix().rows(), a.matrix().cols());
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l)
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
          a.matrix()(static_cast<Eigen::Index>(perm[k]), static_cast<Eigen::Index>(perm[l]));
  return OperatorRep(a.grid(), std::move(out));
}

OperatorRep rank_one(const PhaseGrid& grid, const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
  return OperatorRep(grid, u * v.adjoint());
}

OperatorRep gaussian_projector(const PhaseGrid& grid, const std::optional<PhasePoint>& center) {
  const std::size_t m = grid.position_size();
  Eigen::VectorXcd phi(static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) {
    double r2 = 0.0;
    for (double t : grid.position_node(k)) r2 += t * t;
    phi(static_cast<Eigen::Index>(k)) = std::exp(-0.5 * r2);
  }
  phi.normalize();
  if (center) phi = weyl_operator(grid, *center).matrix() * phi;
  return rank_one(grid, phi, phi);
}

void export_operator_csv(const OperatorRep& a, std::ostream& os) {
  os << grid_header(a.grid(), "qha-operator") << '\n';
  const auto& m = a.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << i << ',' << j << ',' << format_double(m(i, j).real()) << ',' << format_double(m(i, j).imag()) << '\n';
}

OperatorRep import_operator_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw QhaError("operator csv: empty input");
  const PhaseGrid g = parse_grid_header(line, "qha-operator");
  OperatorRep a(g);
  const std::size_t m = g.position_size();
  std::vector<bool> seen(m * m, false);
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string tok; std::getline(ss, tok, ',');) f.push_back(tok);
    if (f.size() != 4) throw QhaError("operator csv: row has wrong field count: " + line);
    const auto i = static_cast<std::size_t>(parse_double(f[0]));
    const auto j = static_cast<std::size_t>(parse_double(f[1]));
    if (i >= m || j >= m || std::to_string(i) != f[0] || std::to_string(j) != f[1])
      throw QhaError("operator csv: bad index: " + line);
    if (seen[i * m + j]) throw QhaError("operator csv: duplicate row: " + line);
    seen[i * m + j] = true;
    a.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = {parse_double(f[2]), parse_double(f[3])};
    ++rows;
  }
  if (rows != m * m) throw QhaError("operator csv: expected " + std::to_string(m * m) + " rows");
  return a;
}

void export_operator_csv(const OperatorRep& a, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw QhaError("cannot open '" + path.string() + "' for writing");
  export_operator_csv(a, os);
  if (!os) throw QhaError("write failed for '" + path.string() + "'");
}

OperatorRep import_operator_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw QhaError("cannot open '" + path.string() + "'");
  try {
    return import_operator_csv(is);
  } catch (const QhaError& e) {
    throw QhaError(path.string() + ": " + e.what());
  }
}

}  // namespace qha

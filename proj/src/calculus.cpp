#include "qha/calculus.hpp"

#include <cmath>

namespace qha {

Matrix momentum_operator(const PhaseGrid& grid, std::size_t axis) {
  const std::size_t d = grid.d(), n = grid.n(), m = grid.position_size();
  if (axis >= d) throw QhaError("momentum_operator: axis out of range");
  // 1-D circulant P[r] = (1/n) Σ_m κ_m e^{iκ_m r h}
  ComplexVector stencil(n);
  for (std::size_t r = 0; r < n; ++r) {
    Complex acc{};
    for (std::size_t q = 0; q < n; ++q) {
      const double kappa = static_cast<double>(centered_frequency(q, n)) * grid.dual_spacing();
      acc += kappa * std::polar(1.0, kappa * static_cast<double>(r) * grid.spacing());
    }
    stencil[r] = acc / static_cast<double>(n);
  }
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<std::size_t> dk(d), dl(d);
  for (std::size_t k = 0; k < m; ++k) {
    unravel(k, d, n, dk.data());
    for (std::size_t l = 0; l < m; ++l) {
      unravel(l, d, n, dl.data());
      bool same = true;
      for (std::size_t a = 0; a < d; ++a)
        if (a != axis && dk[a] != dl[a]) same = false;
      if (same)
        p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
            stencil[wrap_index(static_cast<long>(dk[axis]) - static_cast<long>(dl[axis]), n)];
    }
  }
  return p;
}

Matrix position_operator(const PhaseGrid& grid, std::size_t axis) {
  if (axis >= grid.d()) throw QhaError("position_operator: axis out of range");
  const std::size_t m = grid.position_size();
  Eigen::VectorXcd q(static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) q(static_cast<Eigen::Index>(k)) = grid.position_node(k)[axis];
  return q.asDiagonal();
}

namespace {

// Single-axis shift α_{t e_axis}(A); axis < d is a position direction.
Matrix axis_shift(const OperatorRep& a, std::size_t axis, double t) {
  const PhaseGrid& g = a.grid();
  const std::size_t d = g.d();
  if (axis < d) {
    std::vector<double> x(d, 0.0);
    x[axis] = t;
    const Matrix tr = translation_matrix(g, x);
    return tr * a.matrix() * tr.adjoint();
  }
  std::vector<double> xi(d, 0.0);
  xi[axis - d] = t;
  const Eigen::VectorXcd m = modulation_diagonal(g, xi);
  return m.asDiagonal() * a.matrix() * m.conjugate().asDiagonal();
}

struct Step {
  Matrix value;
  double error = 0.0;
};

Step first_derivative(const OperatorRep& a, std::size_t axis, const DerivativeOptions& opts) {
  if (opts.scheme == DerivativeScheme::commutator) {
    const PhaseGrid& g = a.grid();
    const std::size_t d = g.d();
    const Matrix gen = axis < d ? Matrix(-momentum_operator(g, axis)) : position_operator(g, axis - d);
    return {kI * (gen * a.matrix() - a.matrix() * gen), 0.0};
  }
  const double h0 = opts.step > 0.0 ? opts.step : 1e-3 * a.grid().period();
  std::vector<std::vector<Matrix>> table;
  for (unsigned lvl = 0; lvl <= opts.richardson_levels; ++lvl) {
    const double h = h0 / std::pow(2.0, lvl);
    std::vector<Matrix> row;
    row.push_back((axis_shift(a, axis, h) - axis_shift(a, axis, -h)) / (2.0 * h));
    double factor = 4.0;
    for (unsigned j = 1; j <= lvl; ++j, factor *= 4.0)
      row.push_back((factor * row[j - 1] - table[lvl - 1][j - 1]) / (factor - 1.0));
    table.push_back(std::move(row));
  }
  const auto& last = table.back();
  double err = 0.0;
  if (table.size() > 1) err = (last.back() - table[table.size() - 2].back()).cwiseAbs().maxCoeff();
  return {last.back(), err};
}

void validate(const OperatorRep& a, const MultiIndex& alpha, const DerivativeOptions& opts) {
  if (alpha.axes() != a.grid().axes()) throw QhaError("derivative: multi-index has wrong length");
  if (alpha.order() > opts.max_order) throw QhaError("derivative: order exceeds the configured maximum");
  if (opts.scheme == DerivativeScheme::finite_diff && opts.step != 0.0 && opts.step < 1e-8 * a.grid().period())
    throw QhaError("derivative: step below the floor 1e-8·L");
}

// Last axis to differentiate in position-first order: the highest momentum axis if any, else the highest position axis.
std::size_t last_axis(const MultiIndex& alpha) {
  const std::size_t d = alpha.axes() / 2;
  for (std::size_t a = 2 * d; a-- > d;)
    if (alpha[a] > 0) return a;
  for (std::size_t a = d; a-- > 0;)
    if (alpha[a] > 0) return a;
  throw QhaError("last_axis: zero multi-index");
}

}  // namespace

OperatorRep derivative(const OperatorRep& a, const MultiIndex& alpha, const DerivativeOptions& opts) {
  validate(a, alpha, opts);
  OperatorRep cur = a;
  for (std::size_t axis = 0; axis < alpha.axes(); ++axis)
    for (unsigned k = 0; k < alpha[axis]; ++k) cur = OperatorRep(a.grid(), first_derivative(cur, axis, opts).value);
  return cur;
}

DerivativeTable::DerivativeTable(std::string id, PhaseGrid grid, unsigned max_order)
    : id_(std::move(id)), grid_(grid), max_order_(max_order) {}

const DerivativeEntry& DerivativeTable::at(const MultiIndex& alpha) const {
  auto it = entries_.find(alpha);
  if (it == entries_.end()) throw QhaError("DerivativeTable '" + id_ + "': missing entry");
  return it->second;
}

void DerivativeTable::insert(const MultiIndex& alpha, DerivativeEntry entry) {
  entries_.insert_or_assign(alpha, std::move(entry));
}

DerivativeTable build_derivative_table(const OperatorRep& a, unsigned max_order, const DerivativeOptions& opts,
                                       const Executor& exec, std::string id) {
  if (max_order > opts.max_order) throw QhaError("build_derivative_table: order exceeds the configured maximum");
  DerivativeTable table(std::move(id), a.grid(), max_order);
  table.insert(MultiIndex(a.grid().axes()), {a, 0.0});
  for (unsigned order = 1; order <= max_order; ++order) {
    const auto level = multi_indices_of_order(a.grid().axes(), order);
    std::vector<std::optional<DerivativeEntry>> slots(level.size());
    exec.for_each(level.size(), [&](std::size_t i) {
      const MultiIndex& beta = level[i];
      const std::size_t axis = last_axis(beta);
      const DerivativeEntry& parent = table.at(beta - MultiIndex::unit(beta.axes(), axis));
      Step s = first_derivative(parent.op, axis, opts);
      slots[i] = DerivativeEntry{OperatorRep(a.grid(), std::move(s.value)), parent.error_estimate + s.error};
    });
    for (std::size_t i = 0; i < level.size(); ++i) table.insert(level[i], std::move(*slots[i]));
  }
  return table;
}

std::vector<double> singular_values(const OperatorRep& a) {
  Eigen::BDCSVD<Matrix> svd(a.matrix());
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

double operator_norm(const OperatorRep& a) {
  const auto s = singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

double schatten_norm(const OperatorRep& a, double p) {
  if (!(p >= 1.0)) throw QhaError("schatten_norm: p must be >= 1");
  const auto s = singular_values(a);
  if (std::isinf(p)) return s.empty() ? 0.0 : s.front();
  double acc = 0.0;
  for (double v : s) acc += std::pow(v, p);
  return std::pow(acc, 1.0 / p);
}

double ck_norm(const DerivativeTable& table, unsigned k) {
  if (k > table.max_order()) throw QhaError("ck_norm: table not populated through order k");
  double m = 0.0;
  for (const auto& alpha : multi_indices_up_to(table.grid().axes(), k)) m = std::max(m, operator_norm(table.at(alpha).op));
  return m;
}

double sobolev_norm(const Symbol& f, unsigned k, double p) {
  if (!(p >= 1.0)) throw QhaError("sobolev_norm: p must be >= 1");
  double s = 0.0;
  for (const auto& alpha : multi_indices_up_to(f.grid().axes(), k)) s += lp_norm(symbol_partial(f, alpha), p);
  return s;
}

double sobolev_norm(const DerivativeTable& table, unsigned k, double p) {
  if (!(p >= 1.0)) throw QhaError("sobolev_norm: p must be >= 1");
  if (k > table.max_order()) throw QhaError("sobolev_norm: table not populated through order k");
  double s = 0.0;
  for (const auto& alpha : multi_indices_up_to(table.grid().axes(), k)) s += schatten_norm(table.at(alpha).op, p);
  return s;
}

double weighted_ck_norm(const DerivativeTable& table, unsigned k) {
  if (k > table.max_order()) throw QhaError("weighted_ck_norm: table not populated through order k");
  double s = 0.0;
  for (const auto& alpha : multi_indices_up_to(table.grid().axes(), k))
    s += operator_norm(table.at(alpha).op) / alpha.factorial();
  return s;
}

double geometric_inverse_bound(const DerivativeTable& perturbation, unsigned k) {
  const double w = weighted_ck_norm(perturbation, k);
  if (w >= 1.0) return std::numeric_limits<double>::infinity();
  double kf = 1.0;
  for (unsigned i = 2; i <= k; ++i) kf *= i;
  return kf / (1.0 - w);
}

NormReport verify_derivative_algebra(const OperatorRep& a, const OperatorRep& b, const AlgebraOptions& opts) {
  require_same_grid(a, b);
  const PhaseGrid& g = a.grid();
  NormReport report;
  auto d = [&](const OperatorRep& x, std::size_t axis) {
    return derivative(x, MultiIndex::unit(g.axes(), axis), opts.derivative);
  };
  double product = 0.0;
  for (std::size_t j = 0; j < g.axes(); ++j) {
    const OperatorRep lhs = d(a * b, j);
    const OperatorRep rhs = d(a, j) * b + a * d(b, j);
    product = std::max(product, max_abs_diff(lhs, rhs));
  }
  report.add("product_rule", "derivative of a product", product, opts.tolerance);

  const auto s = singular_values(b);
  const double cond = s.back() > 0.0 ? s.front() / s.back() : std::numeric_limits<double>::infinity();
  if (!(cond <= opts.max_condition)) {
    const std::string note = "B numerically singular (condition " + format_double(cond) + ")";
    report.skip("inverse_rule", "derivative of the inverse", note);
    report.skip("quotient_rule_right", "quotient rule", note);
    report.skip("quotient_rule_left", "quotient rule", note);
    return report;
  }
  const OperatorRep binv(g, b.matrix().inverse());
  double inv = 0.0, qr = 0.0, ql = 0.0;
  for (std::size_t j = 0; j < g.axes(); ++j) {
    const OperatorRep db = d(b, j), da = d(a, j);
    inv = std::max(inv, max_abs_diff(d(binv, j), (binv * db * binv) * Complex(-1.0)));
    qr = std::max(qr, max_abs_diff(d(a * binv, j), da * binv - a * binv * db * binv));
    ql = std::max(ql, max_abs_diff(d(binv * a, j), binv * da - binv * db * binv * a));
  }
  report.add("inverse_rule", "derivative of the inverse", inv, opts.tolerance).extra["condition"] = cond;
  report.add("quotient_rule_right", "quotient rule", qr, opts.tolerance);
  report.add("quotient_rule_left", "quotient rule", ql, opts.tolerance);
  return report;
}

}  // namespace qha

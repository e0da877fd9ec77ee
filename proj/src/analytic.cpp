#include "qha/analytic.hpp"

#include <algorithm>
#include <cmath>

namespace qha {

double AnalyticityFit::c_at(double r) const {
  for (const auto& [rr, c] : scan)
    if (std::abs(rr - r) < 1e-12) return c;
  throw QhaError("analyticity fit: radius was not scanned");
}

std::vector<double> default_radius_grid() {
  std::vector<double> r;
  for (int k = 1; k <= 20; ++k) r.push_back(0.05 * k);
  return r;
}

namespace {

std::vector<double> slack_by_order(const NormMap& norms, double r, unsigned top) {
  std::vector<double> s(top + 1, 0.0);
  for (const auto& [beta, v] : norms) {
    const unsigned k = beta.order();
    s[k] = std::max(s[k], v * std::pow(r, k) / beta.factorial());
  }
  return s;
}

}  // namespace

AnalyticityFit analyticity_fit(const NormMap& norms, const std::vector<double>& radii) {
  if (norms.empty()) throw QhaError("analyticity_fit: no derivative norms");
  if (radii.empty()) throw QhaError("analyticity_fit: empty radius grid");
  unsigned top = 0;
  for (const auto& [beta, v] : norms) top = std::max(top, beta.order());
  AnalyticityFit fit;
  fit.orders_used = top;
  std::vector<double> sorted(radii);
  std::sort(sorted.begin(), sorted.end());
  for (double r : sorted) {
    if (!(r > 0.0)) throw QhaError("analyticity_fit: radii must be positive");
    const auto s = slack_by_order(norms, r, top);
    const double c = *std::max_element(s.begin(), s.end());
    fit.scan.emplace_back(r, c);
    bool stable = std::isfinite(c);
    if (top >= 2)
      for (unsigned k = top - 1; k <= top; ++k) stable = stable && s[k] <= s[k - 1] * (1.0 + 1e-12);
    if (stable) {
      fit.success = true;
      fit.R = r;
      fit.C = c;
      fit.per_order_slack = s;
    }
  }
  return fit;
}

NormMap operator_derivative_norms(const DerivativeTable& table) {
  NormMap out;
  for (const auto& [beta, e] : table.entries()) out[beta] = operator_norm(e.op);
  return out;
}

double refined_sup_norm(const SymbolFamily& family, const MultiIndex& beta, const PhaseGrid& grid) {
  const Symbol s = sample_family_derivative(family, beta, grid);
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs(s[i]) > std::abs(s[best])) best = i;
  std::vector<double> z = grid.point(best).axes();
  auto value = [&](const std::vector<double>& p) { return std::abs(evaluate_family(family, PhasePoint::from_axes(p), beta)); };
  // Cyclic golden-section sweeps over each axis within one grid spacing.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int sweep = 0; sweep < 4; ++sweep)
    for (std::size_t a = 0; a < z.size(); ++a) {
      double lo = z[a] - grid.axis_spacing(a), hi = z[a] + grid.axis_spacing(a);
      auto at = [&](double x) {
        auto p = z;
        p[a] = x;
        return value(p);
      };
      double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
      double f1 = at(x1), f2 = at(x2);
      for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + invphi * (hi - lo);
          f2 = at(x2);
        } else {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - invphi * (hi - lo);
          f1 = at(x1);
        }
      }
      const double x = 0.5 * (lo + hi);
      if (at(x) > value(z)) z[a] = x;
    }
  return std::max(value(z), std::abs(s[best]));
}

NormMap symbol_derivative_norms(const SymbolFamily& family, const PhaseGrid& grid, unsigned max_order) {
  NormMap out;
  for (const auto& beta : multi_indices_up_to(grid.axes(), max_order)) out[beta] = refined_sup_norm(family, beta, grid);
  return out;
}

SeriesCoefficients series_coefficients(const OperatorRep& a, unsigned max_order, const Executor& exec) {
  if (max_order > 8) throw QhaError("series_coefficients: order cap is 8");
  const DerivativeTable t = build_derivative_table(a, max_order, {}, exec);
  SeriesCoefficients out;
  for (const auto& [beta, e] : t.entries()) out.emplace(beta, e.op * (1.0 / beta.factorial()));
  return out;
}

OperatorRep evaluate_series(const SeriesCoefficients& coeffs, const PhasePoint& z, unsigned max_order) {
  if (coeffs.empty()) throw QhaError("evaluate_series: no coefficients");
  const auto axes = z.axes();
  OperatorRep out(coeffs.begin()->second.grid());
  for (const auto& [beta, b] : coeffs)
    if (beta.order() <= max_order) out = out + b * beta.monomial(axes);
  return out;
}

SeriesCoefficients invert_series(const SeriesCoefficients& coeffs, unsigned max_order, double max_condition) {
  if (coeffs.empty()) throw QhaError("invert_series: no coefficients");
  const std::size_t axes = coeffs.begin()->first.axes();
  const MultiIndex zero(axes);
  const auto it0 = coeffs.find(zero);
  if (it0 == coeffs.end()) throw QhaError("invert_series: missing a_0");
  const OperatorRep& a0 = it0->second;
  const auto sv = singular_values(a0);
  const double smax = sv.empty() ? 0.0 : *std::max_element(sv.begin(), sv.end());
  const double smin = sv.empty() ? 0.0 : *std::min_element(sv.begin(), sv.end());
  if (!(smin > 0.0) || smax / smin > max_condition) throw QhaError("invert_series: a_0 is singular");
  const Matrix inv0 = a0.matrix().inverse();
  SeriesCoefficients b;
  b.emplace(zero, OperatorRep(a0.grid(), inv0));
  for (unsigned k = 1; k <= max_order; ++k)
    for (const auto& beta : multi_indices_of_order(axes, k)) {
      Matrix acc = Matrix::Zero(inv0.rows(), inv0.cols());
      for (const auto& alpha : multi_indices_up_to(axes, k)) {
        if (alpha.order() == 0 || !alpha.leq(beta)) continue;
        const auto ia = coeffs.find(alpha);
        if (ia == coeffs.end()) continue;
        acc += ia->second.matrix() * b.at(beta - alpha).matrix();
      }
      b.emplace(beta, OperatorRep(a0.grid(), -inv0 * acc));
    }
  return b;
}

}  // namespace qha

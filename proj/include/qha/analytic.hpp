#pragma once

#include <map>

#include "qha/calculus.hpp"

namespace qha {

using NormMap = std::map<MultiIndex, double>;

/// Factorial-decay fit ‖∂^β·‖ ≤ C β!/R^{|β|}.
struct AnalyticityFit {
  unsigned orders_used = 0;
  double C = 0.0;
  double R = 0.0;
  bool success = false;
  std::vector<double> per_order_slack;      ///< max_{|β|=k} ‖∂^β‖ R^k / β! at the chosen R
  std::vector<std::pair<double, double>> scan;  ///< (R, C(R)) for every scanned radius

  /// C(R) for a scanned radius.
  double c_at(double r) const;
};

/// Radii 0.05, 0.10, …, 1.00.
std::vector<double> default_radius_grid();

/// Picks the largest scanned R with finite C(R) whose per-order slack is
/// non-increasing over the top three orders.
AnalyticityFit analyticity_fit(const NormMap& norms, const std::vector<double>& radii = default_radius_grid());

/// ‖∂^β A‖_op for every entry of the table.
NormMap operator_derivative_norms(const DerivativeTable& table);

/// sup |∂^β f| of a closed-form family over the grid box, refined by local
/// maximization around the best node.
double refined_sup_norm(const SymbolFamily& family, const MultiIndex& beta, const PhaseGrid& grid);
NormMap symbol_derivative_norms(const SymbolFamily& family, const PhaseGrid& grid, unsigned max_order);

using SeriesCoefficients = std::map<MultiIndex, OperatorRep>;

/// b_β = ∂^β A / β!: Taylor coefficients of z ↦ α_z(A).
SeriesCoefficients series_coefficients(const OperatorRep& a, unsigned max_order,
                                       const Executor& exec = default_executor());

/// Σ_{|β| ≤ m} b_β z^β.
OperatorRep evaluate_series(const SeriesCoefficients& coeffs, const PhasePoint& z, unsigned max_order);

/// Coefficients of the inverse power series: b_0 = a_0⁻¹ and
/// b_β = −a_0⁻¹ Σ_{0<α≤β} a_α b_{β−α}.
SeriesCoefficients invert_series(const SeriesCoefficients& coeffs, unsigned max_order, double max_condition = 1e8);

}  // namespace qha

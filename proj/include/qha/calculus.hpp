#pragma once

#include <map>
#include <string>

#include "qha/report.hpp"
#include "qha/weyl_system.hpp"

namespace qha {

enum class DerivativeScheme { finite_diff, commutator };

struct DerivativeOptions {
  DerivativeScheme scheme = DerivativeScheme::commutator;
  double step = 0.0;               ///< finite-difference step; 0 selects 1e−3·L
  unsigned richardson_levels = 1;  ///< extrapolation levels on top of the central difference
  unsigned max_order = 8;
};

/// Generator of position translations along an axis (frequency multiplier, centered band).
Matrix momentum_operator(const PhaseGrid& grid, std::size_t axis);
/// Multiplication by the coordinate t_axis.
Matrix position_operator(const PhaseGrid& grid, std::size_t axis);

/// Phase-space derivative ∂^α A of z ↦ α_z(A) at z = 0.
/// Position directions are applied first, then momentum directions.
OperatorRep derivative(const OperatorRep& a, const MultiIndex& alpha, const DerivativeOptions& opts = {});

struct DerivativeEntry {
  OperatorRep op;
  double error_estimate = 0.0;
};

/// ∂^α A for all |α| ≤ max_order.
class DerivativeTable {
public:
  DerivativeTable(std::string id, PhaseGrid grid, unsigned max_order);

  const std::string& id() const { return id_; }
  const PhaseGrid& grid() const { return grid_; }
  unsigned max_order() const { return max_order_; }

  bool contains(const MultiIndex& alpha) const { return entries_.count(alpha) != 0; }
  const DerivativeEntry& at(const MultiIndex& alpha) const;
  void insert(const MultiIndex& alpha, DerivativeEntry entry);
  const std::map<MultiIndex, DerivativeEntry>& entries() const { return entries_; }

private:
  std::string id_;
  PhaseGrid grid_;
  unsigned max_order_;
  std::map<MultiIndex, DerivativeEntry> entries_;
};

DerivativeTable build_derivative_table(const OperatorRep& a, unsigned max_order, const DerivativeOptions& opts = {},
                                       const Executor& exec = default_executor(), std::string id = "A");

std::vector<double> singular_values(const OperatorRep& a);
double operator_norm(const OperatorRep& a);
/// ‖A‖_{T^p}; p = ∞ gives the operator norm.
double schatten_norm(const OperatorRep& a, double p);

/// max_{|α| ≤ k} ‖∂^α A‖_op.
double ck_norm(const DerivativeTable& table, unsigned k);

/// Σ_{|α| ≤ k} ‖∂^α f‖_{L^p} with spectral derivatives.
double sobolev_norm(const Symbol& f, unsigned k, double p);
/// Σ_{|α| ≤ k} ‖∂^α A‖_{T^p}.
double sobolev_norm(const DerivativeTable& table, unsigned k, double p);

/// Weighted norm Σ_{|α| ≤ k} ‖∂^α X‖_op / α!, submultiplicative under composition.
double weighted_ck_norm(const DerivativeTable& table, unsigned k);

/// For B = I + E with weighted norm ‖E‖_w < 1: ck_norm(B⁻¹) ≤ k!/(1 − ‖E‖_w).
/// Returns infinity when ‖E‖_w ≥ 1.
double geometric_inverse_bound(const DerivativeTable& perturbation, unsigned k);

struct AlgebraOptions {
  DerivativeOptions derivative;
  double tolerance = 1e-5;
  double max_condition = 1e8;
};

/// Product, inverse and both quotient rules for every first-order direction.
NormReport verify_derivative_algebra(const OperatorRep& a, const OperatorRep& b, const AlgebraOptions& opts = {});

}  // namespace qha

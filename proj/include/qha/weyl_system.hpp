#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>

#include "qha/phase_space.hpp"

namespace qha {

using Matrix = Eigen::MatrixXcd;

/// Operator on L²(ℝᵈ) sampled on the position grid of a PhaseGrid.
///
/// The stored matrix is M = h^d · k(t_i, t_j) for the integral kernel k, so
/// composition is the matrix product and the operator trace is the matrix trace.
class OperatorRep {
public:
  explicit OperatorRep(PhaseGrid grid);
  OperatorRep(PhaseGrid grid, Matrix matrix);

  static OperatorRep identity(const PhaseGrid& grid);

  const PhaseGrid& grid() const { return grid_; }
  const Matrix& matrix() const { return matrix_; }
  Matrix& matrix() { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  OperatorRep operator+(const OperatorRep& o) const;
  OperatorRep operator-(const OperatorRep& o) const;
  /// Operator composition.
  OperatorRep operator*(const OperatorRep& o) const;
  OperatorRep operator*(Complex s) const;
  OperatorRep adjoint() const;

  Complex trace() const { return matrix_.trace(); }
  /// Hilbert-Schmidt norm.
  double hs_norm() const { return matrix_.norm(); }

private:
  PhaseGrid grid_;
  Matrix matrix_;
};

void require_same_grid(const OperatorRep& a, const OperatorRep& b);

/// Largest entrywise deviation |A − B|.
double max_abs_diff(const OperatorRep& a, const OperatorRep& b);

/// Fractional translation T_x f = f(· − x) as a band-limited (FFT) matrix;
/// a permutation when x is a multiple of the grid spacing.
Matrix translation_matrix(const PhaseGrid& grid, const std::vector<double>& x);

/// Multiplication by e^{iξ·t}.
Eigen::VectorXcd modulation_diagonal(const PhaseGrid& grid, const std::vector<double>& xi);

/// W^τ_{(x,ξ)} f(t) = e^{iξ·t − iτ x·ξ} f(t − x).
OperatorRep weyl_operator(const PhaseGrid& grid, const PhasePoint& z, double tau = 0.5);

/// α_z(A) = W_z A W_z*; the scalar phase of W^τ cancels, so this is τ-independent.
OperatorRep op_shift(const OperatorRep& a, const PhasePoint& z, double tau = 0.5);

/// α_z(A) for a lattice point given by centered integer coordinates: exact index permutation with phases.
OperatorRep op_shift_lattice(const OperatorRep& a, const std::vector<long>& centered_coords);

/// γ_z(A) = W_{z/2} A W_{z/2} (symmetric Weyl factors).
OperatorRep op_modulate(const OperatorRep& a, const PhasePoint& z);

/// β_−(A) = U A U with (Uφ)(t) = φ(−t), realized by the index reflection i ↦ (n − i) mod n.
OperatorRep parity_conjugate(const OperatorRep& a);

/// Storage index of −t for every position node (per-axis reflection).
std::vector<std::size_t> parity_permutation(const PhaseGrid& grid);

/// Rank-one projector onto the normalized sampled Gaussian π^{−d/4} e^{−|t|²/2},
/// moved to the coherent state W_z φ when a center is given.
OperatorRep gaussian_projector(const PhaseGrid& grid, const std::optional<PhasePoint>& center = {});

/// Rank-one operator u v* from position-space vectors.
OperatorRep rank_one(const PhaseGrid& grid, const Eigen::VectorXcd& u, const Eigen::VectorXcd& v);

void export_operator_csv(const OperatorRep& a, std::ostream& os);
OperatorRep import_operator_csv(std::istream& is);
void export_operator_csv(const OperatorRep& a, const std::filesystem::path& path);
OperatorRep import_operator_csv(const std::filesystem::path& path);

}  // namespace qha

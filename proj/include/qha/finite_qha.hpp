#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "qha/common.hpp"
#include "qha/report.hpp"

namespace qha::finite {

using Matrix = Eigen::MatrixXcd;
/// Function on Ξ = ℤ_N × ℤ_N, index a·N + b for the point (a, b).
using PhaseFunction = Eigen::VectorXcd;

/// ℤ_N with odd N ≥ 3.
class FiniteGroup {
public:
  explicit FiniteGroup(std::int64_t n);
  std::int64_t N() const { return n_; }
  std::int64_t reduce(std::int64_t k) const { return ((k % n_) + n_) % n_; }
  /// e^{2πi k/N} from the reduced residue.
  Complex root(std::int64_t k) const { return roots_[static_cast<std::size_t>(reduce(k))]; }
  /// 2⁻¹ mod N.
  std::int64_t half() const { return (n_ + 1) / 2; }
  std::size_t points() const { return static_cast<std::size_t>(n_ * n_); }

private:
  std::int64_t n_;
  std::vector<Complex> roots_;
};

/// Homomorphism Φ(t) = c·t of ℤ_N.
struct HomZN {
  std::int64_t c = 0;
};

struct Point {
  std::int64_t a = 0;  ///< position
  std::int64_t b = 0;  ///< character
};

Point point_of(const FiniteGroup& g, std::size_t flat);
std::size_t flat_of(const FiniteGroup& g, Point z);

/// W^Φ_{(a,b)} = e^{−2πi b Φ(a)/N} e^{2πi b t/N} δ_{t−a, s}.
Matrix weyl_finite(const FiniteGroup& g, Point z, HomZN phi);
/// m_Φ(z, w) with W_z W_w = m_Φ(z, w) W_{z+w}.
Complex multiplier(const FiniteGroup& g, Point z, Point w, HomZN phi);
/// σ(z, w) = e^{2πi(ξ y − η x)/N}.
Complex sigma(const FiniteGroup& g, Point z, Point w);

/// F_σ f(w) = (1/N) Σ_z σ(z, w) f(z).
PhaseFunction fsigma_finite(const FiniteGroup& g, const PhaseFunction& f);
/// F^Φ_W A(w) = tr(A (W^Φ_w)*).
PhaseFunction fw_finite(const FiniteGroup& g, const Matrix& a, HomZN phi);
/// (F^Φ_W)⁻¹ f = (1/N) Σ_z f(z) W^Φ_z.
Matrix fw_inverse_finite(const FiniteGroup& g, const PhaseFunction& f, HomZN phi);
Matrix op_phi_finite(const FiniteGroup& g, const PhaseFunction& f, HomZN phi);
PhaseFunction symbol_phi_finite(const FiniteGroup& g, const Matrix& a, HomZN phi);

/// α_z(A) = W_z A W_z*.
Matrix shift_finite(const FiniteGroup& g, const Matrix& a, Point z);
/// f(· − z).
PhaseFunction shift_finite(const FiniteGroup& g, const PhaseFunction& f, Point z);
/// One-sided operator modulation γ^Φ_z(A) = W^Φ_z A.
Matrix modulate_finite(const FiniteGroup& g, const Matrix& a, Point z, HomZN phi);
/// U A U with (Uφ)(t) = φ(−t).
Matrix parity_finite(const FiniteGroup& g, const Matrix& a);

/// f ∗ A = (1/N) Σ_z f(z) α_z(A).
Matrix conv_fn_op_finite(const FiniteGroup& g, const PhaseFunction& f, const Matrix& a);
/// (A ∗ B)(z) = tr(A α_z(β_−(B))).
PhaseFunction conv_op_op_finite(const FiniteGroup& g, const Matrix& a, const Matrix& b);

/// Matrix of the symbol map F_σ ∘ F^{Φ'}_W ∘ (F^Φ_W)⁻¹ ∘ F_σ (N² × N²).
Matrix change_of_quantization(const FiniteGroup& g, HomZN from, HomZN to);

/// Exhaustive check of every finite-group identity; rejects even N and N > 13.
NormReport exhaustive_verify(std::int64_t n, std::uint64_t seed = 20261019, double tolerance = 1e-12);

}  // namespace qha::finite

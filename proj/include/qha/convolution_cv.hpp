#pragma once

#include "qha/calculus.hpp"
#include "qha/quantize.hpp"

namespace qha {

/// f ∗ A = Σ_z f(z) α_z(A) · cell over the lattice.
OperatorRep conv_fn_op(const Symbol& f, const OperatorRep& a, const Executor& exec = default_executor());

/// (A ∗ B)(z) = tr(A α_z(β_−(B))) for every lattice point z.
Symbol conv_op_op(const OperatorRep& a, const OperatorRep& b, const Executor& exec = default_executor());

/// Grid samples of (1−Δ)^{−power} δ₀: real, parity-even, unit mass, with
/// unnormalized transform ∫ G(z) e^{iσ(z,w)} dz = (1 + |w|²)^{−power}.
Symbol bessel_delta(const PhaseGrid& grid, unsigned power);

/// Parity f(−z) on the grid.
Symbol reflect(const Symbol& f);

struct CordesKernel {
  PhaseGrid grid;
  OperatorRep K;
  double trace_norm;
  Symbol bessel_symbol;
};

/// K = op^w((1−Δ)^{−d} δ₀).
CordesKernel cordes_kernel(const PhaseGrid& grid);

/// (1−Δ)^d f, spectrally.
Symbol apply_bessel(const Symbol& f);

/// (1−Δ)^d A assembled from the derivative table (needs order 2d).
OperatorRep apply_bessel(const DerivativeTable& table);

/// ‖op^w(f) − P(f) ∗ K‖_F.
double cordes_identity_defect(const Symbol& f, const CordesKernel& k);

/// ‖op^w(f)‖_{T^p} against (2π)^{d/p} ‖K‖_{T¹} ‖f‖_{W^{2d,p}}.
NormReport cv_bound(const Symbol& f, double p, const CordesKernel& k);

/// ‖sym^w(A)‖_{L^p} against (2π)^d (2π)^{d/p} ‖K‖_{T¹} ‖A‖_{W^{2d,p}},
/// together with the defect of sym^w(A) = (2π)^d P(A) ∗ K.
NormReport reverse_cv_bound(const DerivativeTable& table, double p, const CordesKernel& k);

}  // namespace qha

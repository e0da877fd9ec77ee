#pragma once

#include "qha/weyl_system.hpp"

namespace qha {

/// Normalization constants of the two phase-space Fourier transforms.
struct NormalizationProfile {
  double fsigma_prefactor = 0.0;      ///< (2π)^{−d}
  double fw_measure_prefactor = 0.0;  ///< c_W in F_W⁻¹(f) = c_W ∫ f(w) W_w dw
};

/// The fixed profile for dimension d.
NormalizationProfile normalization(std::size_t d);

/// Recomputes c_W from ‖F_W(P₀)‖ = ‖P₀‖_{T²} for the Gaussian ground-state projector
/// and throws if it disagrees with normalization(d) beyond 1e−12 relative.
NormalizationProfile calibrate_normalization(const PhaseGrid& grid);

/// F_σ(f)(w) = (2π)^{−d} ∫ f(z) e^{iσ(z,w)} dz on the grid; self-inverse.
Symbol fourier_sigma(const Symbol& f);

/// F_W^τ(A)(w) = tr(A (W^τ_w)*) for every lattice point w of the grid.
Symbol fourier_weyl(const OperatorRep& a, double tau = 0.5, const Executor& exec = default_executor());

/// (F_W^τ)⁻¹(f) = c_W Σ_w f(w) W^τ_w · cell.
OperatorRep fourier_weyl_inverse(const Symbol& f, double tau = 0.5, const Executor& exec = default_executor());

/// | ‖F_W(A)‖_{L²} − ‖A‖_{T²} | / ‖A‖_{T²} under the calibrated measure.
double plancherel_defect(const OperatorRep& a);

}  // namespace qha

#pragma once

#include "qha/fourier.hpp"

namespace qha {

/// Weyl quantization op^w = F_W⁻¹ ∘ F_σ.
OperatorRep op_weyl(const Symbol& f);

/// τ-quantization (F_W^τ)⁻¹ ∘ F_σ; τ = 0 is the Kohn-Nirenberg rule.
OperatorRep op_tau(const Symbol& f, double tau);

/// τ-symbol of an operator, F_σ ∘ F_W^τ (inverse of op_tau).
Symbol symbol_of(const OperatorRep& a, double tau = 0.5);

/// Maps Kohn-Nirenberg symbols to τ-symbols: op_tau(n_tau(f, τ), τ) = op_tau(f, 0).
Symbol n_tau(const Symbol& f, double tau);

}  // namespace qha

#pragma once

#include "qha/quantize.hpp"

namespace qha {

struct WindowSpec {
  enum class Kind { gaussian_symbol, gaussian_projector };
  Kind kind = Kind::gaussian_symbol;
  double width = 1.0;
  std::optional<PhasePoint> center;

  static WindowSpec symbol(double width = 1.0, std::optional<PhasePoint> center = {});
  static WindowSpec projector(double width = 1.0, std::optional<PhasePoint> center = {});
};

/// Gaussian window e^{−|z − c|²/(2 width²)} on the phase-space grid.
Symbol window_symbol(const WindowSpec& spec, const PhaseGrid& grid);
/// Projector onto the normalized e^{−|t|²/(2 width²)}, moved by W_c.
OperatorRep window_operator(const WindowSpec& spec, const PhaseGrid& grid);
/// Symbol window g with V_g(sym A) = V_B(A): (2π)^{−d} sym^w(B).
Symbol matched_window(const OperatorRep& b);

struct STFTOptions {
  std::size_t stride = 2;  ///< z-subgrid stride per axis
  bool refine = true;      ///< add the lattice neighbours of every per-w argmax
};

/// Samples F(z, w) for the z nodes on a subgrid and every lattice w.
struct STFTData {
  PhaseGrid grid;
  std::vector<std::size_t> z_nodes;  ///< flat grid indices
  std::vector<ComplexVector> slices;  ///< slices[i][w_flat]
};

/// V_g f(z, w) = ⟨f, γ_w α_z g⟩ with the cell-weighted grid pairing.
STFTData stft_function(const Symbol& f, const Symbol& g, const STFTOptions& opts = {},
                       const Executor& exec = default_executor());
STFTData stft_function(const Symbol& f, const WindowSpec& g, const STFTOptions& opts = {},
                       const Executor& exec = default_executor());

/// γ_w for a lattice point w (centered coordinates): the operator whose Fourier-Weyl
/// transform is F_W(A)(· − w). Agrees with W_{w/2} A W_{w/2} away from the grid edge
/// and is the exact dual of function modulation on the lattice.
OperatorRep op_modulate_lattice(const OperatorRep& a, const std::vector<long>& w);

/// V_B A(z, w) = tr(A (γ_w α_z B)*) with γ_w from op_modulate_lattice.
STFTData stft_operator(const OperatorRep& a, const OperatorRep& b, const STFTOptions& opts = {},
                       const Executor& exec = default_executor());
STFTData stft_operator(const OperatorRep& a, const WindowSpec& b, const STFTOptions& opts = {},
                       const Executor& exec = default_executor());

/// Σ_w max_z |F(z, w)| · cell.
double mixed_norm_inf1(const STFTData& f);

double m_inf1_norm(const Symbol& f, const Symbol& g, const STFTOptions& opts = {},
                   const Executor& exec = default_executor());
double m_inf1_norm(const Symbol& f, const WindowSpec& g, const STFTOptions& opts = {},
                   const Executor& exec = default_executor());
double m_inf1_norm(const OperatorRep& a, const OperatorRep& b, const STFTOptions& opts = {},
                   const Executor& exec = default_executor());
double m_inf1_norm(const OperatorRep& a, const WindowSpec& b, const STFTOptions& opts = {},
                   const Executor& exec = default_executor());

/// ∫ min_{|α| ≤ 2d+1} |w^α|^{−1} dw = 4^d (1 + 2d).
double embedding_integral(std::size_t d);

/// max_{|α| ≤ 2d+1} Σ_{β ≤ α} C(α, β) ‖∂^{α−β} g‖_{L¹}: with the integral above it bounds
/// m_inf1_norm(f, g) / max_{|α| ≤ 2d+1} ‖∂^α f‖_∞.
double window_derivative_constant(const Symbol& g);

/// Rows `z,w,abs` of |F|.
void export_stft_csv(const STFTData& f, const std::filesystem::path& path);

}  // namespace qha

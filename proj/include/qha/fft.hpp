#pragma once

#include <span>

#include "qha/common.hpp"

namespace qha::fft {

/// forward: sum_j x_j e^{-2πi jk/n}; backward: e^{+2πi jk/n}. Both unnormalized.
enum class Direction { forward, backward };

/// In-place multidimensional DFT of a row-major array with the given shape.
void transform(std::span<Complex> data, std::span<const std::size_t> shape, Direction dir);

/// Convenience for an isotropic cube n^rank.
void transform_cube(std::span<Complex> data, std::size_t rank, std::size_t n, Direction dir);

/// DFT in centered coordinates on an isotropic cube: index i stands for i − n/2,
/// out[p] = Σ_k in[k] e^{∓2πi p̃·k̃/n} (forward: minus sign).
void centered_transform_cube(std::span<Complex> data, std::size_t rank, std::size_t n, Direction dir);

}  // namespace qha::fft

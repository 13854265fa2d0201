#pragma once

#include <span>

#include "degen/field.hpp"

namespace degen::detail {

/// Unnormalized in-place DFT over all axes of the grid. sign = -1 forward,
/// +1 backward. Plans are cached per (dim, N, sign) and safe to execute
/// concurrently.
void fft_inplace(const SpectralGrid& grid, std::span<Complex> data, int sign);

}  // namespace degen::detail

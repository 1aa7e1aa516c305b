#pragma once

#include <span>
#include <vector>

#include "mslab/field.hpp"

namespace mslab::fft {

// Unnormalized forward, normalized inverse, in place on n^d row-major data.
void forward(const GridSpec& g, std::span<cplx> data);
void inverse(const GridSpec& g, std::span<cplx> data);

// |k|^2 for every spectral index, and per-axis wavenumbers broadcast to the full grid.
const std::vector<double>& k_squared(const GridSpec& g);
const std::vector<double>& k_axis(const GridSpec& g, int axis);

}  // namespace mslab::fft

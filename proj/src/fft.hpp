#pragma once

#include <complex>

#include "gevrey/grid.hpp"

namespace gevrey::detail {

/// Unnormalized out-of-place complex DFT over the grid (in != out). `forward` uses the
/// e^{-ikx} kernel. Thread-safe: plans are cached per (dim, n, direction).
void execute_fft(const Grid& grid, const std::complex<double>* in, std::complex<double>* out, bool forward);

}  // namespace gevrey::detail

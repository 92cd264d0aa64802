#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gevrey/field.hpp"

namespace gevrey {

/// Deterministic uniform generator (splitmix64) whose output is identical on
/// every platform, unlike the standard distributions.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::uint64_t state_;
};

/// Steady 2D Taylor-Green cell u = (cos x sin y, -sin x cos y). Periodic on a
/// box with L = pi (or integer multiples).
Field taylor_green_2d(const Grid& grid);

/// Arnold-Beltrami-Childress flow (A sin z + C cos y, B sin x + A cos z,
/// C sin y + B cos x); curl u = u.
Field abc_flow(const Grid& grid, double a = 1.0, double b = 1.0, double c = 1.0);

/// One Gaussian lobe exp(-|x - center|^2 / width^2) of the vector potential
/// (3D) or stream function (2D), scaled by `strength` per component.
struct VortexLobe {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double width = 1.0;
  std::array<double, 3> strength{0.0, 0.0, 1.0};
};

/// Gaussian-enveloped vortex: u = curl A (3D) or (d2 psi, -d1 psi) (2D),
/// built spectrally from the dealiased potential so that u is band-limited
/// and discretely divergence-free.
Field gaussian_vortex(const Grid& grid, std::span<const VortexLobe> lobes);

/// Seeded random lobes: centers within `max_offset` of the origin, widths in
/// [width_lo, width_hi], strengths standard normal.
std::vector<VortexLobe> random_lobes(int dim, std::uint64_t seed, int count, double max_offset, double width_lo,
                                     double width_hi);

/// Seeded scalar sum of Gaussian bumps, for scalar probes.
Field random_gaussian_scalar(const Grid& grid, std::uint64_t seed, int count, double max_offset, double width_lo,
                             double width_hi);

/// Real random field with independent standard-normal samples.
Field random_field(const Grid& grid, int components, std::uint64_t seed);

/// Real random field whose coefficients vanish outside |mode index| <= max_mode
/// on every axis.
Field random_band_limited(const Grid& grid, int components, int max_mode, std::uint64_t seed);

/// Standard decaying vortex family used by probes and weighted runs: member
/// `index` of a seeded family of 3-lobe vortices sized for a box of
/// half-length 2 pi.
Field decaying_vortex(const Grid& grid, int index, std::uint64_t seed = 20240611);

/// Initial-condition selector used by the CLI: "taylor-green-2d", "abc",
/// "gaussian-vortex", "taylor-green-perturbed".
Field named_initial_condition(const std::string& name, const Grid& grid, std::uint64_t seed);

}  // namespace gevrey

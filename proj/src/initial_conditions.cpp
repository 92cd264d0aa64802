#include "gevrey/initial_conditions.hpp"

#include <cmath>
#include <numbers>

#include "gevrey/error.hpp"

namespace gevrey {

std::uint64_t SeededRng::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SeededRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SeededRng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Field taylor_green_2d(const Grid& grid) {
  if (grid.dim() != 2) throw InvalidArgument("taylor_green_2d needs a 2D grid");
  return Field::sample(grid, 2, [](const std::array<double, 3>& x, int c) {
    return c == 0 ? std::cos(x[0]) * std::sin(x[1]) : -std::sin(x[0]) * std::cos(x[1]);
  });
}

Field abc_flow(const Grid& grid, double a, double b, double c) {
  if (grid.dim() != 3) throw InvalidArgument("abc_flow needs a 3D grid");
  return Field::sample(grid, 3, [=](const std::array<double, 3>& x, int comp) {
    switch (comp) {
      case 0:
        return a * std::sin(x[2]) + c * std::cos(x[1]);
      case 1:
        return b * std::sin(x[0]) + a * std::cos(x[2]);
      default:
        return c * std::sin(x[1]) + b * std::cos(x[0]);
    }
  });
}

namespace {

// Spectral curl of a potential: 3D u = i k x A, 2D u = (i k2 psi, -i k1 psi).
SpectralField spectral_curl(const SpectralField& potential) {
  const Grid& grid = potential.grid();
  const std::complex<double> i(0.0, 1.0);
  SpectralField u(grid, grid.dim());
  for (std::size_t p = 0; p < grid.points(); ++p) {
    const auto k = potential.wavevector(p);
    if (grid.dim() == 2) {
      const auto psi = potential.component(0)[p];
      u.component(0)[p] = i * k[1] * psi;
      u.component(1)[p] = -i * k[0] * psi;
    } else {
      const auto a0 = potential.component(0)[p];
      const auto a1 = potential.component(1)[p];
      const auto a2 = potential.component(2)[p];
      u.component(0)[p] = i * (k[1] * a2 - k[2] * a1);
      u.component(1)[p] = i * (k[2] * a0 - k[0] * a2);
      u.component(2)[p] = i * (k[0] * a1 - k[1] * a0);
    }
  }
  return u;
}

Field curl_of_potential(const Field& potential) {
  SpectralField coefficients = spectral_transform(potential);
  dealias_in_place(coefficients);
  return inverse_transform(spectral_curl(coefficients));
}

}  // namespace

Field gaussian_vortex(const Grid& grid, std::span<const VortexLobe> lobes) {
  const int potential_components = grid.dim() == 3 ? 3 : 1;
  const Field potential = Field::sample(grid, potential_components, [&](const std::array<double, 3>& x, int c) {
    double value = 0.0;
    for (const auto& lobe : lobes) {
      double r2 = 0.0;
      for (int d = 0; d < grid.dim(); ++d) {
        const double dx = x[static_cast<std::size_t>(d)] - lobe.center[static_cast<std::size_t>(d)];
        r2 += dx * dx;
      }
      const double strength = grid.dim() == 3 ? lobe.strength[static_cast<std::size_t>(c)] : lobe.strength[2];
      value += strength * std::exp(-r2 / (lobe.width * lobe.width));
    }
    return value;
  });
  return curl_of_potential(potential);
}

std::vector<VortexLobe> random_lobes(int dim, std::uint64_t seed, int count, double max_offset, double width_lo,
                                     double width_hi) {
  SeededRng rng(seed);
  std::vector<VortexLobe> lobes(static_cast<std::size_t>(count));
  for (auto& lobe : lobes) {
    for (int d = 0; d < dim; ++d) lobe.center[static_cast<std::size_t>(d)] = rng.uniform(-max_offset, max_offset);
    lobe.width = rng.uniform(width_lo, width_hi);
    for (auto& s : lobe.strength) s = rng.normal();
  }
  return lobes;
}

Field random_gaussian_scalar(const Grid& grid, std::uint64_t seed, int count, double max_offset, double width_lo,
                             double width_hi) {
  const auto lobes = random_lobes(grid.dim(), seed, count, max_offset, width_lo, width_hi);
  return Field::sample(grid, 1, [&](const std::array<double, 3>& x, int) {
    double value = 0.0;
    for (const auto& lobe : lobes) {
      double r2 = 0.0;
      for (int d = 0; d < grid.dim(); ++d) {
        const double dx = x[static_cast<std::size_t>(d)] - lobe.center[static_cast<std::size_t>(d)];
        r2 += dx * dx;
      }
      value += lobe.strength[0] * std::exp(-r2 / (lobe.width * lobe.width));
    }
    return value;
  });
}

Field random_field(const Grid& grid, int components, std::uint64_t seed) {
  SeededRng rng(seed);
  Field f(grid, components);
  for (double& v : f.values()) v = rng.normal();
  return f;
}

Field random_band_limited(const Grid& grid, int components, int max_mode, std::uint64_t seed) {
  SpectralField coefficients = spectral_transform(random_field(grid, components, seed));
  for (std::size_t p = 0; p < grid.points(); ++p) {
    const auto slots = grid.unflatten(p);
    bool keep = true;
    for (int d = 0; d < grid.dim(); ++d) keep = keep && std::abs(grid.mode_index(slots[static_cast<std::size_t>(d)])) <= max_mode;
    if (keep) continue;
    for (int c = 0; c < components; ++c) coefficients.component(c)[p] = 0.0;
  }
  return inverse_transform(coefficients);
}

Field decaying_vortex(const Grid& grid, int index, std::uint64_t seed) {
  const auto lobes = random_lobes(grid.dim(), seed + 7919ULL * static_cast<std::uint64_t>(index), 3, 0.5, 1.3, 1.6);
  return gaussian_vortex(grid, lobes);
}

Field named_initial_condition(const std::string& name, const Grid& grid, std::uint64_t seed) {
  if (name == "taylor-green-2d") return taylor_green_2d(grid);
  if (name == "abc") return abc_flow(grid);
  if (name == "gaussian-vortex") return decaying_vortex(grid, 0, seed);
  if (name == "taylor-green-perturbed") {
    if (grid.dim() != 2) throw InvalidArgument("taylor-green-perturbed needs a 2D grid");
    // Stream-function perturbation with RMS amplitude 0.05.
    Field psi = random_band_limited(grid, 1, 4, seed);
    double sum_sq = 0.0;
    for (double v : psi.values()) sum_sq += v * v;
    psi *= 0.05 / std::sqrt(sum_sq / static_cast<double>(grid.points()));
    return taylor_green_2d(grid) + curl_of_potential(psi);
  }
  throw InvalidArgument("unknown initial condition '" + name + "'");
}

}  // namespace gevrey

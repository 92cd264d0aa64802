#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "gevrey/grid.hpp"

namespace gevrey {

/// Largest |alpha| accepted by derivative(); above it (ik)^alpha amplifies
/// round-off beyond the signal at n = 64.
inline constexpr int kDefaultDerivativeCap = 10;

/// Default tolerance on the boundary-shell mass fraction.
inline constexpr double kDefaultShellTolerance = 1e-8;

/// Real samples of a scalar (1 component) or vector (dim components) field.
/// Storage is component-major: each component is a contiguous row-major block.
class Field {
 public:
  Field(Grid grid, int components);
  Field(Grid grid, int components, std::vector<double> values);

  /// Samples f(x) at every grid point; `fn(x, c)` returns component c.
  static Field sample(const Grid& grid, int components,
                      const std::function<double(const std::array<double, 3>&, int)>& fn);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }

  std::span<double> component(int c);
  std::span<const double> component(int c) const;
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  /// Physical coordinates of flat sample index i (unused axes are 0).
  std::array<double, 3> position(std::size_t i) const;

  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double factor);
  friend Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
  friend Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
  friend Field operator*(double factor, Field f) { return f *= factor; }

 private:
  Grid grid_;
  int components_;
  std::vector<double> values_;
};

/// Fourier coefficients F(k) normalized so that f(x) = sum_k F(k) e^{i k.(x+L)},
/// i.e. phases are measured from the first sample at x = -L.
class SpectralField {
 public:
  SpectralField(Grid grid, int components);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }

  std::span<std::complex<double>> component(int c);
  std::span<const std::complex<double>> component(int c) const;
  std::span<std::complex<double>> values() { return values_; }
  std::span<const std::complex<double>> values() const { return values_; }

  /// Physical wavevector of flat slot i (unused axes are 0).
  std::array<double, 3> wavevector(std::size_t i) const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double factor);
  friend SpectralField operator+(SpectralField lhs, const SpectralField& rhs) { return lhs += rhs; }
  friend SpectralField operator-(SpectralField lhs, const SpectralField& rhs) { return lhs -= rhs; }
  friend SpectralField operator*(double factor, SpectralField f) { return f *= factor; }

 private:
  Grid grid_;
  int components_;
  std::vector<std::complex<double>> values_;
};

/// Forward transform. Throws NumericalError on non-finite samples.
SpectralField spectral_transform(const Field& f);
/// Inverse transform; returns the real part of the synthesized samples.
Field inverse_transform(const SpectralField& coefficients);

/// Multiplies by (ik)^alpha. Odd powers annihilate the Nyquist slot so that
/// real fields stay real. Throws InvalidArgument when |alpha| > cap.
SpectralField derivative(const SpectralField& coefficients, const MultiIndex& alpha,
                         int cap = kDefaultDerivativeCap);
/// Physical-space convenience: inverse_transform(derivative(transform(f))).
Field derivative(const Field& f, const MultiIndex& alpha, int cap = kDefaultDerivativeCap);

/// Wavevector of slot i as seen by first derivatives: Nyquist components are 0.
std::array<double, 3> derivative_wavevector(const Grid& grid, std::size_t i);

/// Maximum |mode index| per axis kept by the 2/3 rule: floor(n/3).
int dealias_cutoff(const Grid& grid);
/// True when every axis mode index of slot i satisfies |index| <= n/3.
bool within_dealias_band(const Grid& grid, std::size_t i);
/// 2/3-rule truncation: zeroes coefficients with any |axis index| > n/3.
SpectralField dealias(const SpectralField& coefficients);
void dealias_in_place(SpectralField& coefficients);

/// <x> = (1 + |x|^2)^(1/2) raised to `exponent` at every sample.
std::vector<double> weight_samples(const Grid& grid, double exponent);
/// Pointwise multiplication by <x>^(power * l). Requires l admissible.
Field apply_weight(const Field& f, const WeightParams& weight, int power);

/// Fraction of sum |u|^2 carried by samples with max_i |x_i| > 0.9 L.
/// Zero for the zero field.
double boundary_shell_fraction(const Field& f);
/// Throws BoundaryShellViolation when the fraction exceeds `tolerance`.
void require_decaying(const Field& f, double tolerance = kDefaultShellTolerance);

/// Flat binary snapshot: dim, n, L (IEEE double bits), components as
/// little-endian 64-bit words, then the samples as little-endian doubles
/// in component-major row-major order.
void write_snapshot(std::ostream& out, const Field& f);
Field read_snapshot(std::istream& in);

}  // namespace gevrey

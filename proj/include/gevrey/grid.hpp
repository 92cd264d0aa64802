#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace gevrey {

/// Uniform periodic discretization of the box [-L, L)^dim standing in for
/// whole space. Samples are stored row-major with axis 0 slowest; spectral
/// coefficients use the same layout in FFT order (0, 1, ..., n/2-1, -n/2, ..., -1).
class Grid {
 public:
  /// Throws InvalidArgument unless dim is 2 or 3, n is a power of two >= 8
  /// and half_length > 0.
  Grid(int dim, int n, double half_length);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double half_length() const { return half_length_; }
  double spacing() const { return 2.0 * half_length_ / n_; }
  /// h^dim, the quadrature weight of a single sample.
  double cell_volume() const;
  /// (2L)^dim.
  double box_volume() const;
  std::size_t points() const { return points_; }

  /// Coordinate of sample i along any axis: -L + i*h.
  double coordinate(int i) const { return -half_length_ + i * spacing(); }
  /// Signed mode index of FFT slot i: i for i < n/2, i - n otherwise.
  int mode_index(int i) const { return i < n_ / 2 ? i : i - n_; }
  /// Physical wavenumber pi/L * mode_index(i).
  double wavenumber(int i) const;
  /// Fundamental wavenumber pi/L.
  double wavenumber_unit() const;

  /// Per-axis slots of flat index `flat`; unused trailing axes are 0.
  std::array<int, 3> unflatten(std::size_t flat) const {
    const std::size_t mask = static_cast<std::size_t>(n_) - 1;
    if (dim_ == 2) return {static_cast<int>(flat >> shift_), static_cast<int>(flat & mask), 0};
    return {static_cast<int>(flat >> (2 * shift_)), static_cast<int>((flat >> shift_) & mask),
            static_cast<int>(flat & mask)};
  }
  std::size_t flatten(const std::array<int, 3>& slots) const;

  bool operator==(const Grid&) const = default;
  std::string describe() const;

 private:
  int dim_;
  int n_;
  int shift_;  // log2(n)
  double half_length_;
  std::size_t points_;
};

/// Multi-index alpha in N_0^dim; unused trailing entries are zero.
struct MultiIndex {
  std::array<int, 3> alpha{0, 0, 0};

  constexpr MultiIndex() = default;
  constexpr MultiIndex(int a0, int a1, int a2 = 0) : alpha{a0, a1, a2} {}

  int order() const { return alpha[0] + alpha[1] + alpha[2]; }
  int operator[](int axis) const { return alpha[static_cast<std::size_t>(axis)]; }

  /// Componentwise beta <= alpha.
  bool dominates(const MultiIndex& beta) const;
  MultiIndex operator-(const MultiIndex& other) const;
  MultiIndex operator+(const MultiIndex& other) const;
  /// alpha + e_axis.
  MultiIndex raised(int axis) const;

  auto operator<=>(const MultiIndex&) const = default;
  std::string str() const;

  /// All multi-indices of order m in dim dimensions, in lexicographically
  /// descending order ((m,0,0) first). Count is m+1 (dim 2) or (m+1)(m+2)/2
  /// (dim 3).
  static std::vector<MultiIndex> enumerate(int dim, int m);
  /// All multi-indices of order in [lo, hi].
  static std::vector<MultiIndex> enumerate_range(int dim, int lo, int hi);
  /// All beta with beta <= alpha (including 0 and alpha itself).
  static std::vector<MultiIndex> below(const MultiIndex& alpha);
};

/// Multinomial-style product of binomials prod_i C(alpha_i, beta_i).
double binomial(const MultiIndex& alpha, const MultiIndex& beta);
double binomial(int n, int k);

/// Exponent l of the weight <x>^l = (1 + |x|^2)^(l/2).
struct WeightParams {
  double ell = 0.0;

  /// Admissible range: 0 <= l < 3/2 in 3D, 0 <= l < 1 in 2D.
  bool admissible(int dim) const;
  /// Throws InvalidArgument when not admissible(dim).
  void require_admissible(int dim) const;
};

}  // namespace gevrey

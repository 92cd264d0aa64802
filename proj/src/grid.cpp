#include "gevrey/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gevrey/error.hpp"

namespace gevrey {

BoundaryShellViolation::BoundaryShellViolation(double fraction, double tolerance)
    : Error("boundary-shell mass fraction " + std::to_string(fraction) + " exceeds " +
            std::to_string(tolerance) + "; field is not a valid whole-space surrogate"),
      fraction_(fraction) {}

Grid::Grid(int dim, int n, double half_length) : dim_(dim), n_(n), shift_(0), half_length_(half_length) {
  if (dim != 2 && dim != 3) throw InvalidArgument("grid dimension must be 2 or 3");
  if (n < 8 || (n & (n - 1)) != 0) throw InvalidArgument("points per axis must be a power of two >= 8");
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw InvalidArgument("box half-length must be positive and finite");
  }
  while ((1 << shift_) < n) ++shift_;
  points_ = 1;
  for (int d = 0; d < dim; ++d) points_ *= static_cast<std::size_t>(n);
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

double Grid::box_volume() const { return std::pow(2.0 * half_length_, dim_); }

double Grid::wavenumber_unit() const { return std::numbers::pi / half_length_; }

double Grid::wavenumber(int i) const { return wavenumber_unit() * mode_index(i); }

std::size_t Grid::flatten(const std::array<int, 3>& slots) const {
  std::size_t flat = 0;
  for (int d = 0; d < dim_; ++d) {
    flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(slots[static_cast<std::size_t>(d)]);
  }
  return flat;
}

std::string Grid::describe() const {
  std::ostringstream out;
  out << "dim=" << dim_ << " n=" << n_ << " L=" << half_length_;
  return out.str();
}

bool MultiIndex::dominates(const MultiIndex& beta) const {
  for (std::size_t i = 0; i < 3; ++i) {
    if (beta.alpha[i] > alpha[i]) return false;
  }
  return true;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  return {alpha[0] - other.alpha[0], alpha[1] - other.alpha[1], alpha[2] - other.alpha[2]};
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  return {alpha[0] + other.alpha[0], alpha[1] + other.alpha[1], alpha[2] + other.alpha[2]};
}

MultiIndex MultiIndex::raised(int axis) const {
  MultiIndex out = *this;
  ++out.alpha[static_cast<std::size_t>(axis)];
  return out;
}

std::string MultiIndex::str() const {
  std::ostringstream out;
  out << '(' << alpha[0] << ';' << alpha[1] << ';' << alpha[2] << ')';
  return out.str();
}

std::vector<MultiIndex> MultiIndex::enumerate(int dim, int m) {
  if (m < 0) throw InvalidArgument("multi-index order must be nonnegative");
  std::vector<MultiIndex> out;
  if (dim == 2) {
    for (int a0 = m; a0 >= 0; --a0) out.emplace_back(a0, m - a0, 0);
  } else if (dim == 3) {
    for (int a0 = m; a0 >= 0; --a0) {
      for (int a1 = m - a0; a1 >= 0; --a1) out.emplace_back(a0, a1, m - a0 - a1);
    }
  } else {
    throw InvalidArgument("multi-index dimension must be 2 or 3");
  }
  return out;
}

std::vector<MultiIndex> MultiIndex::enumerate_range(int dim, int lo, int hi) {
  std::vector<MultiIndex> out;
  for (int m = lo; m <= hi; ++m) {
    auto level = enumerate(dim, m);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<MultiIndex> MultiIndex::below(const MultiIndex& alpha) {
  std::vector<MultiIndex> out;
  for (int b0 = 0; b0 <= alpha.alpha[0]; ++b0) {
    for (int b1 = 0; b1 <= alpha.alpha[1]; ++b1) {
      for (int b2 = 0; b2 <= alpha.alpha[2]; ++b2) out.emplace_back(b0, b1, b2);
    }
  }
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return std::round(result);
}

double binomial(const MultiIndex& alpha, const MultiIndex& beta) {
  double result = 1.0;
  for (std::size_t i = 0; i < 3; ++i) result *= binomial(alpha.alpha[i], beta.alpha[i]);
  return result;
}

bool WeightParams::admissible(int dim) const {
  if (!(ell >= 0.0)) return false;
  return dim == 3 ? ell < 1.5 : ell < 1.0;
}

void WeightParams::require_admissible(int dim) const {
  if (!admissible(dim)) {
    throw InvalidArgument("weight exponent " + std::to_string(ell) + " is not admissible in dimension " +
                          std::to_string(dim) + (dim == 3 ? " (need 0 <= l < 3/2)" : " (need 0 <= l < 1)"));
  }
}

}  // namespace gevrey

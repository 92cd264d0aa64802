#include "gevrey/field.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "fft.hpp"
#include "gevrey/error.hpp"
#include "gevrey/parallel.hpp"

namespace gevrey {

Field::Field(Grid grid, int components) : Field(grid, components, std::vector<double>(grid.points() * static_cast<std::size_t>(components))) {}

Field::Field(Grid grid, int components, std::vector<double> values)
    : grid_(grid), components_(components), values_(std::move(values)) {
  if (components != 1 && components != grid_.dim()) {
    throw InvalidArgument("field must have 1 or dim components");
  }
  if (values_.size() != grid_.points() * static_cast<std::size_t>(components)) {
    throw InvalidArgument("field sample count does not match grid");
  }
}

Field Field::sample(const Grid& grid, int components,
                    const std::function<double(const std::array<double, 3>&, int)>& fn) {
  Field f(grid, components);
  for (int c = 0; c < components; ++c) {
    auto comp = f.component(c);
    for (std::size_t i = 0; i < grid.points(); ++i) comp[i] = fn(f.position(i), c);
  }
  return f;
}

std::span<double> Field::component(int c) {
  return std::span<double>(values_).subspan(static_cast<std::size_t>(c) * grid_.points(), grid_.points());
}

std::span<const double> Field::component(int c) const {
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(c) * grid_.points(), grid_.points());
}

std::array<double, 3> Field::position(std::size_t i) const {
  const auto slots = grid_.unflatten(i);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int d = 0; d < grid_.dim(); ++d) x[static_cast<std::size_t>(d)] = grid_.coordinate(slots[static_cast<std::size_t>(d)]);
  return x;
}

bool Field::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

namespace {

template <class F>
void require_compatible(const F& a, const F& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components()) {
    throw InvalidArgument("fields live on different grids or have different component counts");
  }
}

}  // namespace

Field& Field::operator+=(const Field& other) {
  require_compatible(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_compatible(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

SpectralField::SpectralField(Grid grid, int components)
    : grid_(grid), components_(components), values_(grid.points() * static_cast<std::size_t>(components)) {
  if (components != 1 && components != grid_.dim()) {
    throw InvalidArgument("spectral field must have 1 or dim components");
  }
}

std::span<std::complex<double>> SpectralField::component(int c) {
  return std::span<std::complex<double>>(values_).subspan(static_cast<std::size_t>(c) * grid_.points(), grid_.points());
}

std::span<const std::complex<double>> SpectralField::component(int c) const {
  return std::span<const std::complex<double>>(values_).subspan(static_cast<std::size_t>(c) * grid_.points(),
                                                                grid_.points());
}

std::array<double, 3> SpectralField::wavevector(std::size_t i) const {
  const auto slots = grid_.unflatten(i);
  std::array<double, 3> k{0.0, 0.0, 0.0};
  for (int d = 0; d < grid_.dim(); ++d) k[static_cast<std::size_t>(d)] = grid_.wavenumber(slots[static_cast<std::size_t>(d)]);
  return k;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_compatible(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_compatible(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double factor) {
  for (auto& v : values_) v *= factor;
  return *this;
}

SpectralField spectral_transform(const Field& f) {
  if (!f.all_finite()) throw NumericalError("spectral_transform: non-finite sample values");
  const Grid& grid = f.grid();
  SpectralField out(grid, f.components());
  const double scale = 1.0 / static_cast<double>(grid.points());
  parallel_for(static_cast<std::size_t>(f.components()), [&](std::size_t c) {
    const auto src = f.component(static_cast<int>(c));
    std::vector<std::complex<double>> buffer(src.begin(), src.end());
    auto dst = out.component(static_cast<int>(c));
    detail::execute_fft(grid, buffer.data(), dst.data(), true);
    for (auto& v : dst) v *= scale;
  });
  return out;
}

Field inverse_transform(const SpectralField& coefficients) {
  const Grid& grid = coefficients.grid();
  Field out(grid, coefficients.components());
  parallel_for(static_cast<std::size_t>(coefficients.components()), [&](std::size_t c) {
    const auto src = coefficients.component(static_cast<int>(c));
    std::vector<std::complex<double>> buffer(grid.points());
    detail::execute_fft(grid, src.data(), buffer.data(), false);
    auto dst = out.component(static_cast<int>(c));
    for (std::size_t i = 0; i < buffer.size(); ++i) dst[i] = buffer[i].real();
  });
  return out;
}

namespace {

/// Per-axis real factor k^p, with the Nyquist slot removed for odd p.
std::vector<double> axis_factor(const Grid& grid, int power) {
  std::vector<double> m(static_cast<std::size_t>(grid.n()));
  for (int i = 0; i < grid.n(); ++i) {
    const bool nyquist = grid.mode_index(i) == -grid.n() / 2;
    m[static_cast<std::size_t>(i)] = (nyquist && power % 2 == 1) ? 0.0 : std::pow(grid.wavenumber(i), power);
  }
  return m;
}

}  // namespace

SpectralField derivative(const SpectralField& coefficients, const MultiIndex& alpha, int cap) {
  if (alpha.order() > cap) {
    throw InvalidArgument("derivative order " + std::to_string(alpha.order()) + " exceeds cap " + std::to_string(cap));
  }
  const Grid& grid = coefficients.grid();
  for (int d = grid.dim(); d < 3; ++d) {
    if (alpha[d] != 0) throw InvalidArgument("multi-index has entries beyond the grid dimension");
  }
  for (int d = 0; d < 3; ++d) {
    if (alpha[d] < 0) throw InvalidArgument("multi-index entries must be nonnegative");
  }
  SpectralField out = coefficients;
  if (alpha.order() == 0) return out;

  // (ik)^alpha = i^|alpha| * prod_d k_d^alpha_d
  const std::size_t n = static_cast<std::size_t>(grid.n());
  const auto f0 = axis_factor(grid, alpha[0]);
  const auto f1 = axis_factor(grid, alpha[1]);
  const auto f2 = grid.dim() == 3 ? axis_factor(grid, alpha[2]) : std::vector<double>(1, 1.0);
  const std::size_t inner = grid.dim() == 3 ? n : 1;
  std::vector<double> multiplier(grid.points());
  std::size_t p = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double ab = f0[a] * f1[b];
      for (std::size_t c = 0; c < inner; ++c) multiplier[p++] = ab * f2[c];
    }
  }
  const int quarter = alpha.order() % 4;
  for (int comp = 0; comp < out.components(); ++comp) {
    auto values = out.component(comp);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double re = values[i].real() * multiplier[i];
      const double im = values[i].imag() * multiplier[i];
      switch (quarter) {
        case 0: values[i] = {re, im}; break;
        case 1: values[i] = {-im, re}; break;
        case 2: values[i] = {-re, -im}; break;
        default: values[i] = {im, -re}; break;
      }
    }
  }
  return out;
}

Field derivative(const Field& f, const MultiIndex& alpha, int cap) {
  return inverse_transform(derivative(spectral_transform(f), alpha, cap));
}

std::array<double, 3> derivative_wavevector(const Grid& grid, std::size_t i) {
  const auto slots = grid.unflatten(i);
  std::array<double, 3> k{0.0, 0.0, 0.0};
  for (int d = 0; d < grid.dim(); ++d) {
    const int slot = slots[static_cast<std::size_t>(d)];
    if (grid.mode_index(slot) != -grid.n() / 2) k[static_cast<std::size_t>(d)] = grid.wavenumber(slot);
  }
  return k;
}

int dealias_cutoff(const Grid& grid) { return grid.n() / 3; }

bool within_dealias_band(const Grid& grid, std::size_t i) {
  const int cutoff = dealias_cutoff(grid);
  const auto slots = grid.unflatten(i);
  for (int d = 0; d < grid.dim(); ++d) {
    if (std::abs(grid.mode_index(slots[static_cast<std::size_t>(d)])) > cutoff) return false;
  }
  return true;
}

void dealias_in_place(SpectralField& coefficients) {
  const Grid& grid = coefficients.grid();
  const std::size_t n = static_cast<std::size_t>(grid.n());
  const int cutoff = dealias_cutoff(grid);
  std::vector<char> keep(n);
  for (std::size_t i = 0; i < n; ++i) keep[i] = std::abs(grid.mode_index(static_cast<int>(i))) <= cutoff;
  const std::size_t inner = grid.dim() == 3 ? n : 1;
  for (int c = 0; c < coefficients.components(); ++c) {
    auto values = coefficients.component(c);
    std::size_t p = 0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const bool ab = keep[a] && keep[b];
        for (std::size_t z = 0; z < inner; ++z, ++p) {
          if (!(ab && (inner == 1 || keep[z]))) values[p] = 0.0;
        }
      }
    }
  }
}

SpectralField dealias(const SpectralField& coefficients) {
  SpectralField out = coefficients;
  dealias_in_place(out);
  return out;
}

std::vector<double> weight_samples(const Grid& grid, double exponent) {
  std::vector<double> w(grid.points(), 1.0);
  if (exponent == 0.0) return w;
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const auto slots = grid.unflatten(i);
    double r2 = 0.0;
    for (int d = 0; d < grid.dim(); ++d) {
      const double x = grid.coordinate(slots[static_cast<std::size_t>(d)]);
      r2 += x * x;
    }
    w[i] = std::pow(1.0 + r2, 0.5 * exponent);
  }
  return w;
}

Field apply_weight(const Field& f, const WeightParams& weight, int power) {
  weight.require_admissible(f.grid().dim());
  Field out = f;
  if (weight.ell == 0.0 || power == 0) return out;
  const auto w = weight_samples(f.grid(), power * weight.ell);
  for (int c = 0; c < out.components(); ++c) {
    auto comp = out.component(c);
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= w[i];
  }
  return out;
}

double boundary_shell_fraction(const Field& f) {
  const Grid& grid = f.grid();
  const double edge = 0.9 * grid.half_length();
  std::vector<double> total(grid.points(), 0.0), shell(grid.points(), 0.0);
  for (std::size_t i = 0; i < grid.points(); ++i) {
    double mass = 0.0;
    for (int c = 0; c < f.components(); ++c) mass += f.component(c)[i] * f.component(c)[i];
    total[i] = mass;
    const auto slots = grid.unflatten(i);
    for (int d = 0; d < grid.dim(); ++d) {
      if (std::abs(grid.coordinate(slots[static_cast<std::size_t>(d)])) > edge) {
        shell[i] = mass;
        break;
      }
    }
  }
  const double sum = pairwise_sum(total);
  return sum > 0.0 ? pairwise_sum(shell) / sum : 0.0;
}

void require_decaying(const Field& f, double tolerance) {
  const double fraction = boundary_shell_fraction(f);
  if (fraction > tolerance) throw BoundaryShellViolation(fraction, tolerance);
}

namespace {

void put_word(std::ostream& out, std::uint64_t word) {
  if constexpr (std::endian::native == std::endian::big) word = __builtin_bswap64(word);
  out.write(reinterpret_cast<const char*>(&word), sizeof word);
}

std::uint64_t get_word(std::istream& in) {
  std::uint64_t word = 0;
  in.read(reinterpret_cast<char*>(&word), sizeof word);
  if (!in) throw InvalidArgument("snapshot: truncated input");
  if constexpr (std::endian::native == std::endian::big) word = __builtin_bswap64(word);
  return word;
}

}  // namespace

void write_snapshot(std::ostream& out, const Field& f) {
  put_word(out, static_cast<std::uint64_t>(f.grid().dim()));
  put_word(out, static_cast<std::uint64_t>(f.grid().n()));
  put_word(out, std::bit_cast<std::uint64_t>(f.grid().half_length()));
  put_word(out, static_cast<std::uint64_t>(f.components()));
  for (double v : f.values()) put_word(out, std::bit_cast<std::uint64_t>(v));
}

Field read_snapshot(std::istream& in) {
  const auto dim = static_cast<int>(get_word(in));
  const auto n = static_cast<int>(get_word(in));
  const double half_length = std::bit_cast<double>(get_word(in));
  const auto components = static_cast<int>(get_word(in));
  Grid grid(dim, n, half_length);
  std::vector<double> values(grid.points() * static_cast<std::size_t>(components));
  for (double& v : values) v = std::bit_cast<double>(get_word(in));
  return Field(grid, components, std::move(values));
}

}  // namespace gevrey

#include "gevrey/pressure.hpp"

#include <algorithm>
#include <cmath>

#include "gevrey/error.hpp"
#include "gevrey/parallel.hpp"

namespace gevrey {
namespace {

MultiIndex unit(int axis) { return MultiIndex{}.raised(axis); }

void require_vector(const Grid& grid, int components, const char* what) {
  if (components != grid.dim()) throw InvalidArgument(std::string(what) + " needs a vector field");
}

Field scalar_copy(const Field& f, int c) {
  const auto src = f.component(c);
  return Field(f.grid(), 1, std::vector<double>(src.begin(), src.end()));
}

}  // namespace

std::vector<Field> velocity_gradient(const SpectralField& u) {
  const Grid& grid = u.grid();
  const int dim = grid.dim();
  require_vector(grid, u.components(), "velocity_gradient");
  std::vector<Field> per_axis;
  per_axis.reserve(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) per_axis.push_back(inverse_transform(derivative(u, unit(j))));
  std::vector<Field> grad;
  grad.reserve(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) grad.push_back(scalar_copy(per_axis[static_cast<std::size_t>(j)], i));
  }
  return grad;
}

SpectralField advection(const SpectralField& w, const SpectralField& v) {
  const Grid& grid = v.grid();
  const int dim = grid.dim();
  if (!(w.grid() == grid)) throw InvalidArgument("advection: fields live on different grids");
  require_vector(grid, w.components(), "advection");
  const Field wp = inverse_transform(dealias(w));
  const SpectralField vd = dealias(v);
  std::vector<Field> per_axis;
  for (int j = 0; j < dim; ++j) per_axis.push_back(inverse_transform(derivative(vd, unit(j))));
  Field product(grid, v.components());
  for (int i = 0; i < v.components(); ++i) {
    auto out = product.component(i);
    for (int j = 0; j < dim; ++j) {
      const auto wj = wp.component(j);
      const auto dj = per_axis[static_cast<std::size_t>(j)].component(i);
      for (std::size_t p = 0; p < out.size(); ++p) out[p] += wj[p] * dj[p];
    }
  }
  SpectralField result = spectral_transform(product);
  dealias_in_place(result);
  return result;
}

SpectralField advection(const Field& w, const Field& v) {
  return advection(spectral_transform(w), spectral_transform(v));
}

SpectralField pressure_source(const SpectralField& u, const SpectralField& v) {
  const Grid& grid = u.grid();
  const int dim = grid.dim();
  if (!(v.grid() == grid)) throw InvalidArgument("pressure_source: fields live on different grids");
  const auto gu = velocity_gradient(dealias(u));
  const auto gv = &u == &v ? gu : velocity_gradient(dealias(v));
  Field source(grid, 1);
  auto out = source.values();
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      // d_i u_j d_j v_i
      const auto a = gu[static_cast<std::size_t>(j * dim + i)].values();
      const auto b = gv[static_cast<std::size_t>(i * dim + j)].values();
      for (std::size_t p = 0; p < out.size(); ++p) out[p] += a[p] * b[p];
    }
  }
  SpectralField result = spectral_transform(source);
  dealias_in_place(result);
  return result;
}

SpectralField inverse_laplacian(const SpectralField& source) {
  SpectralField p = source;
  for (std::size_t i = 0; i < source.grid().points(); ++i) {
    const auto k = source.wavevector(i);
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    for (int c = 0; c < p.components(); ++c) p.component(c)[i] = k2 > 0.0 ? p.component(c)[i] / k2 : 0.0;
  }
  return p;
}

namespace {

PressureResult finish_pressure(const SpectralField& source) {
  const Grid& grid = source.grid();
  const SpectralField P = inverse_laplacian(source);

  SpectralField centred = source;
  centred.values()[0] = 0.0;
  SpectralField neg_laplacian(grid, 1);
  for (int d = 0; d < grid.dim(); ++d) {
    MultiIndex twice;
    twice.alpha[static_cast<std::size_t>(d)] = 2;
    neg_laplacian -= derivative(P, twice);
  }
  const Field lhs = inverse_transform(neg_laplacian);
  const Field rhs = inverse_transform(centred);
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < grid.points(); ++i) {
    diff += (lhs.values()[i] - rhs.values()[i]) * (lhs.values()[i] - rhs.values()[i]);
    norm += rhs.values()[i] * rhs.values()[i];
  }

  SpectralField grad(grid, grid.dim());
  for (int d = 0; d < grid.dim(); ++d) {
    const SpectralField dp = derivative(P, unit(d));
    std::copy(dp.values().begin(), dp.values().end(), grad.component(d).begin());
  }
  return PressureResult{inverse_transform(P), inverse_transform(grad), norm > 0.0 ? std::sqrt(diff / norm) : 0.0};
}

}  // namespace

PressureResult bilinear_pressure(const Field& u, const Field& v) {
  require_vector(u.grid(), u.components(), "bilinear_pressure");
  require_vector(v.grid(), v.components(), "bilinear_pressure");
  return finish_pressure(pressure_source(spectral_transform(u), spectral_transform(v)));
}

PressureResult solve_pressure(const Field& u) {
  require_vector(u.grid(), u.components(), "solve_pressure");
  const SpectralField U = spectral_transform(u);
  return finish_pressure(pressure_source(U, U));
}

SpectralField bilinear_pressure_gradient(const SpectralField& u, const SpectralField& v) {
  const Grid& grid = u.grid();
  const SpectralField P = inverse_laplacian(pressure_source(u, v));
  SpectralField grad(grid, grid.dim());
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const auto k = derivative_wavevector(grid, i);
    for (int d = 0; d < grid.dim(); ++d) {
      grad.component(d)[i] = std::complex<double>(0.0, k[static_cast<std::size_t>(d)]) * P.values()[i];
    }
  }
  return grad;
}

SpectralField leray_project(const SpectralField& u) {
  const Grid& grid = u.grid();
  require_vector(grid, u.components(), "leray_project");
  SpectralField out = u;
  const int dim = grid.dim();
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const auto k = derivative_wavevector(grid, i);
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) continue;
    std::complex<double> kdotu = 0.0;
    for (int d = 0; d < dim; ++d) kdotu += k[static_cast<std::size_t>(d)] * out.component(d)[i];
    for (int d = 0; d < dim; ++d) out.component(d)[i] -= k[static_cast<std::size_t>(d)] * kdotu / k2;
  }
  return out;
}

Field leray_project(const Field& u) { return inverse_transform(leray_project(spectral_transform(u))); }

double divergence_max(const SpectralField& u) {
  const Grid& grid = u.grid();
  require_vector(grid, u.components(), "divergence_max");
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const auto k = derivative_wavevector(grid, i);
    std::complex<double> kdotu = 0.0;
    for (int d = 0; d < grid.dim(); ++d) kdotu += k[static_cast<std::size_t>(d)] * u.component(d)[i];
    worst = std::max(worst, std::abs(kdotu));
  }
  return worst;
}

double divergence_max(const Field& u) { return divergence_max(spectral_transform(u)); }

double cz_ratio(const Field& f, const WeightParams& w, const NormOptions& opts) {
  if (f.components() != 1) throw InvalidArgument("cz_ratio needs a scalar field");
  w.require_admissible(f.grid().dim());
  if (w.ell > 0.0) require_decaying(f, opts.shell_tolerance);
  const int dim = f.grid().dim();
  const SpectralField F = spectral_transform(f);
  std::vector<MultiIndex> second;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) second.push_back(unit(i) + unit(j));
  }
  // Shell checks already passed on f; derivatives are evaluated unchecked.
  NormOptions unchecked = opts;
  unchecked.shell_tolerance = 1.0;
  std::vector<double> squares(second.size());
  parallel_for(second.size(), [&](std::size_t a) {
    const double v = weighted_L2(inverse_transform(derivative(F, second[a], opts.derivative_cap)), w, unchecked);
    squares[a] = v * v;
  });
  SpectralField laplacian(f.grid(), 1);
  for (int i = 0; i < dim; ++i) laplacian += derivative(F, unit(i) + unit(i));
  const double denominator = weighted_L2(inverse_transform(laplacian), w, unchecked);
  if (denominator == 0.0) throw InvalidArgument("cz_ratio: Laplacian vanishes identically");
  return std::sqrt(pairwise_sum(squares)) / denominator;
}

}  // namespace gevrey

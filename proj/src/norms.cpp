#include "gevrey/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gevrey/error.hpp"
#include "gevrey/parallel.hpp"

namespace gevrey {
namespace {

void check_weighted(const Field& f, const WeightParams& w, const NormOptions& opts) {
  w.require_admissible(f.grid().dim());
  if (w.ell > 0.0) require_decaying(f, opts.shell_tolerance);
}

double weighted_L2_unchecked(const Field& f, const std::vector<double>& weight_sq) {
  std::vector<double> terms(f.grid().points());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    double mag = 0.0;
    for (int c = 0; c < f.components(); ++c) mag += f.component(c)[i] * f.component(c)[i];
    terms[i] = weight_sq[i] * mag;
  }
  return std::sqrt(f.grid().cell_volume() * pairwise_sum(terms));
}

double weighted_sup_unchecked(const Field& f, const std::vector<double>& weight) {
  double best = 0.0;
  for (std::size_t i = 0; i < f.grid().points(); ++i) {
    double mag = 0.0;
    for (int c = 0; c < f.components(); ++c) mag += f.component(c)[i] * f.component(c)[i];
    best = std::max(best, weight[i] * std::sqrt(mag));
  }
  return best;
}

void check_order(int m, const NormOptions& opts) {
  if (m < 0) throw InvalidArgument("derivative order must be nonnegative");
  if (m > opts.derivative_cap) throw InvalidArgument("derivative order exceeds the configured cap");
}

// Per-alpha weighted L^2 norms of d^alpha u, computed through the bank. The
// l = 0 case goes through Parseval and never leaves coefficient space.
std::vector<double> alpha_norms(DerivativeBank& bank, const std::vector<MultiIndex>& alphas, const WeightParams& w) {
  std::vector<double> norms(alphas.size());
  if (w.ell == 0.0) {
    parallel_for(alphas.size(), [&](std::size_t i) { norms[i] = spectral_L2(bank.spectrum(), alphas[i]); });
    return norms;
  }
  bank.prefetch(alphas);
  const auto weight_sq = weight_samples(bank.grid(), 2.0 * w.ell);
  std::vector<const Field*> fields;
  for (const auto& a : alphas) fields.push_back(&bank.get(a));
  parallel_for(alphas.size(), [&](std::size_t i) { norms[i] = weighted_L2_unchecked(*fields[i], weight_sq); });
  return norms;
}

void check_bank(DerivativeBank& bank, const WeightParams& w, const NormOptions& opts) {
  w.require_admissible(bank.grid().dim());
  if (w.ell > 0.0) require_decaying(bank.get(MultiIndex{}), opts.shell_tolerance);
}

}  // namespace

double weighted_L2(const Field& f, const WeightParams& w, const NormOptions& opts) {
  check_weighted(f, w, opts);
  return weighted_L2_unchecked(f, weight_samples(f.grid(), 2.0 * w.ell));
}

double weighted_sup(const Field& f, const WeightParams& w, const NormOptions& opts) {
  check_weighted(f, w, opts);
  return weighted_sup_unchecked(f, weight_samples(f.grid(), w.ell));
}

double spectral_L2(const SpectralField& coefficients, const MultiIndex& alpha) {
  const Grid& grid = coefficients.grid();
  // |(ik)^alpha|^2 per axis, with the Nyquist slot removed for odd powers to
  // match derivative().
  std::array<std::vector<double>, 3> factors;
  for (int d = 0; d < grid.dim(); ++d) {
    auto& f = factors[static_cast<std::size_t>(d)];
    f.resize(static_cast<std::size_t>(grid.n()));
    for (int i = 0; i < grid.n(); ++i) {
      const int p = alpha[d];
      const bool nyquist = grid.mode_index(i) == -grid.n() / 2;
      f[static_cast<std::size_t>(i)] = (nyquist && p % 2 == 1) ? 0.0 : std::pow(grid.wavenumber(i), 2 * p);
    }
  }
  std::vector<double> terms(grid.points());
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const auto slots = grid.unflatten(i);
    double m = 1.0;
    for (int d = 0; d < grid.dim(); ++d) m *= factors[static_cast<std::size_t>(d)][static_cast<std::size_t>(slots[static_cast<std::size_t>(d)])];
    double mag = 0.0;
    for (int c = 0; c < coefficients.components(); ++c) mag += std::norm(coefficients.component(c)[i]);
    terms[i] = m * mag;
  }
  return std::sqrt(grid.box_volume() * pairwise_sum(terms));
}

double seminorm_m(DerivativeBank& bank, int m, const WeightParams& w, const NormOptions& opts) {
  check_order(m, opts);
  check_bank(bank, w, opts);
  const auto norms = alpha_norms(bank, MultiIndex::enumerate(bank.grid().dim(), m), w);
  return pairwise_sum(norms);
}

double seminorm_m(const Field& f, int m, const WeightParams& w, const NormOptions& opts) {
  DerivativeBank bank(f, opts.derivative_cap);
  return seminorm_m(bank, m, w, opts);
}

double seminorm_m_inf(DerivativeBank& bank, int m, const WeightParams& w, const NormOptions& opts) {
  check_order(m, opts);
  check_bank(bank, w, opts);
  const auto alphas = MultiIndex::enumerate(bank.grid().dim(), m);
  bank.prefetch(alphas);
  const auto weight = weight_samples(bank.grid(), w.ell);
  std::vector<double> sups;
  for (const auto& a : alphas) sups.push_back(weighted_sup_unchecked(bank.get(a), weight));
  return pairwise_sum(sups);
}

double seminorm_m_inf(const Field& f, int m, const WeightParams& w, const NormOptions& opts) {
  DerivativeBank bank(f, opts.derivative_cap);
  return seminorm_m_inf(bank, m, w, opts);
}

double sobolev_norm(DerivativeBank& bank, int r, const WeightParams& w, const NormOptions& opts) {
  check_order(r, opts);
  check_bank(bank, w, opts);
  const double l2 = spectral_L2(bank.spectrum(), MultiIndex{});
  std::vector<double> squares{l2 * l2};
  if (r >= 1) {
    for (double v : alpha_norms(bank, MultiIndex::enumerate_range(bank.grid().dim(), 1, r), w)) squares.push_back(v * v);
  }
  return std::sqrt(pairwise_sum(squares));
}

double sobolev_norm(const Field& f, int r, const WeightParams& w, const NormOptions& opts) {
  DerivativeBank bank(f, opts.derivative_cap);
  return sobolev_norm(bank, r, w, opts);
}

void GevreyParams::validate(int derivative_cap) const {
  if (!(s >= 1.0)) throw InvalidArgument("Gevrey index s must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("Gevrey radius tau must be positive");
  if (m_max < 4 || m_max > derivative_cap) throw InvalidArgument("m_max must lie in [4, derivative cap]");
}

GevreySeries gevrey_series(DerivativeBank& bank, int m_max, const WeightParams& w, const NormOptions& opts) {
  check_order(m_max, opts);
  check_bank(bank, w, opts);
  const auto alphas = MultiIndex::enumerate_range(bank.grid().dim(), 0, m_max);
  const auto norms = alpha_norms(bank, alphas, w);
  GevreySeries series{std::vector<double>(static_cast<std::size_t>(m_max) + 1, 0.0), w};
  std::size_t offset = 0;
  for (int m = 0; m <= m_max; ++m) {
    const std::size_t count = MultiIndex::enumerate(bank.grid().dim(), m).size();
    series.entries[static_cast<std::size_t>(m)] =
        pairwise_sum(std::span<const double>(norms).subspan(offset, count));
    offset += count;
  }
  return series;
}

GevreySeries gevrey_series(const Field& f, int m_max, const WeightParams& w, const NormOptions& opts) {
  DerivativeBank bank(f, opts.derivative_cap);
  return gevrey_series(bank, m_max, w, opts);
}

double log_factorial(int n) {
  if (n < 0) throw InvalidArgument("factorial of a negative integer");
  static const std::array<double, 21> table = [] {
    std::array<double, 21> t{};
    double f = 1.0;
    t[0] = 0.0;
    for (int i = 1; i <= 20; ++i) {
      f *= i;
      t[static_cast<std::size_t>(i)] = std::log(f);
    }
    return t;
  }();
  if (n <= 20) return table[static_cast<std::size_t>(n)];
  return std::lgamma(n + 1.0);
}

double gevrey_weight(double tau, int power, int factorial_arg, double s) {
  if (power == 0) return std::exp(-s * log_factorial(factorial_arg));
  return std::exp(power * std::log(tau) - s * log_factorial(factorial_arg));
}

namespace {

void check_series(const GevreySeries& series, const GevreyParams& g) {
  g.validate(std::max(g.m_max, kDefaultDerivativeCap));
  if (series.max_order() < g.m_max) throw InvalidArgument("Gevrey series does not cover m_max");
}

}  // namespace

SeriesValue x_norm(const GevreySeries& series, const GevreyParams& g) {
  check_series(series, g);
  std::vector<double> terms;
  for (int m = GevreyParams::kMinOrder; m <= g.m_max; ++m) {
    terms.push_back(series.entries[static_cast<std::size_t>(m)] * gevrey_weight(g.tau, m - 3, m - 3, g.s));
  }
  return {pairwise_sum(terms), terms.back()};
}

SeriesValue y_norm(const GevreySeries& series, const GevreyParams& g) {
  check_series(series, g);
  std::vector<double> terms;
  for (int m = GevreyParams::kMinOrder + 1; m <= g.m_max; ++m) {
    terms.push_back(series.entries[static_cast<std::size_t>(m)] * (m - 3) * gevrey_weight(g.tau, m - 4, m - 3, g.s));
  }
  return {pairwise_sum(terms), terms.back()};
}

}  // namespace gevrey

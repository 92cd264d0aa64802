#include "gevrey/analysis_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "gevrey/csv.hpp"
#include "gevrey/error.hpp"
#include "gevrey/parallel.hpp"
#include "gevrey/pressure.hpp"

namespace gevrey {

// ---- combinatorics ----

namespace {

double lookup(const IndexedReals& values, const MultiIndex& index, const char* which) {
  const auto it = values.find(index);
  if (it == values.end()) {
    throw InvalidArgument(std::string("identity check: missing ") + which + " value at " + index.str());
  }
  return it->second;
}

double log_binomial(int n, int k) { return log_factorial(n) - log_factorial(k) - log_factorial(n - k); }

}  // namespace

SidePair check_convolution_identity(int m, int j, const IndexedReals& x, const IndexedReals& y) {
  if (j < 0 || j > m || m > 12) throw InvalidArgument("identity check needs 0 <= j <= m <= 12");
  SidePair out;
  long double lhs = 0.0L;
  for (const auto& alpha : MultiIndex::enumerate(3, m)) {
    for (const auto& beta : MultiIndex::below(alpha)) {
      if (beta.order() != j) continue;
      lhs += static_cast<long double>(lookup(x, beta, "x")) * lookup(y, alpha - beta, "y");
    }
  }
  long double sx = 0.0L, sy = 0.0L;
  for (const auto& beta : MultiIndex::enumerate(3, j)) sx += lookup(x, beta, "x");
  for (const auto& gamma : MultiIndex::enumerate(3, m - j)) sy += lookup(y, gamma, "y");
  out.lhs = static_cast<double>(lhs);
  out.rhs = static_cast<double>(sx * sy);
  return out;
}

SidePair check_binomial_domination(const MultiIndex& alpha, const MultiIndex& beta) {
  if (!alpha.dominates(beta)) throw InvalidArgument("binomial domination needs beta <= alpha");
  return {binomial(alpha, beta), binomial(alpha.order(), beta.order())};
}

DominationSweep sweep_binomial_domination(int max_order) {
  DominationSweep sweep;
  for (const auto& alpha : MultiIndex::enumerate_range(3, 0, max_order)) {
    for (const auto& beta : MultiIndex::below(alpha)) {
      const auto [lhs, rhs] = check_binomial_domination(alpha, beta);
      ++sweep.cases;
      if (lhs > rhs) ++sweep.violations;
      sweep.worst_ratio = std::max(sweep.worst_ratio, lhs / rhs);
    }
  }
  return sweep;
}

namespace {

void require_A_range(int m, int j) {
  if (j < 3 || 2 * j > m) throw InvalidArgument("A_{m,j,s} needs 3 <= j <= m/2");
}

void require_A_prime_range(int m, int j) {
  if (j < m / 2 + 1 || j > m - 3) throw InvalidArgument("A'_{m,j,s} needs floor(m/2) + 1 <= j <= m - 3");
}

void require_s(double s) {
  if (!(s >= 1.0)) throw InvalidArgument("Gevrey index s must be >= 1");
}

}  // namespace

double eval_A(int m, int j, double s) {
  require_A_range(m, j);
  require_s(s);
  return std::exp(log_binomial(m, j) + s * log_factorial(m - j - 2) + 0.75 * s * log_factorial(j - 1) +
                  0.25 * s * log_factorial(j - 3) - std::log(m - j - 2.0) - s * log_factorial(m - 3));
}

double eval_A_factored(int m, int j, double s) {
  require_A_range(m, j);
  require_s(s);
  const double rational = static_cast<double>(m) * (m - 1) * (m - 2) /
                          (static_cast<double>(j) * (m - j) * (m - j - 1) * (m - j - 2));
  return std::exp((1.0 - s) * log_binomial(m - 3, j - 1)) * rational /
         (std::pow(j - 1.0, s / 4.0) * std::pow(j - 2.0, s / 4.0));
}

double eval_A_prime(int m, int j, double s) {
  require_A_prime_range(m, j);
  require_s(s);
  return std::exp(log_binomial(m, j) + s * log_factorial(j - 3) + 0.25 * s * log_factorial(m - j - 2) +
                  0.75 * s * log_factorial(m - j) - std::log(j - 3.0) - s * log_factorial(m - 3));
}

double eval_A_prime_factored(int m, int j, double s) {
  require_A_prime_range(m, j);
  require_s(s);
  const double rational = static_cast<double>(m) * (m - 1) * (m - 2) /
                          (static_cast<double>(j) * (j - 1) * (j - 2) * (j - 3));
  return std::exp((1.0 - s) * log_binomial(m - 3, j - 3)) * rational /
         (std::pow(m - j - 1.0, s / 4.0) * std::pow(m - j, s / 4.0));
}

ASweep sweep_A(int m_max, double s) {
  require_s(s);
  ASweep sweep;
  sweep.s = s;
  sweep.m_max = m_max;
  const auto gap = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); };
  for (int m = 5; m <= m_max; ++m) {
    sweep.sup_binomial_ratio =
        std::max(sweep.sup_binomial_ratio, binomial(m, 2) / ((m - 4.0) * std::pow(m - 3.0, s)));
    for (int j = 3; 2 * j <= m; ++j) {
      const double a = eval_A(m, j, s);
      sweep.max_factorization_gap = std::max(sweep.max_factorization_gap, gap(a, eval_A_factored(m, j, s)));
      if (a > sweep.sup_A) {
        sweep.sup_A = a;
        sweep.sup_A_m = m;
        sweep.sup_A_j = j;
      }
      const double majorant = 1.0 / (j * std::pow(j - 1.0, s / 4.0) * std::pow(j - 2.0, s / 4.0));
      sweep.sup_A_over_majorant = std::max(sweep.sup_A_over_majorant, a / majorant);
      ++sweep.cases;
    }
    for (int j = m / 2 + 1; j <= m - 3; ++j) {
      const double a = eval_A_prime(m, j, s);
      sweep.max_factorization_gap = std::max(sweep.max_factorization_gap, gap(a, eval_A_prime_factored(m, j, s)));
      if (a > sweep.sup_A_prime) {
        sweep.sup_A_prime = a;
        sweep.sup_A_prime_m = m;
        sweep.sup_A_prime_j = j;
      }
      ++sweep.cases;
    }
  }
  return sweep;
}

// ---- probes ----

ProbeReport make_report(std::string name, std::string input, double lhs, double rhs, const Grid& grid) {
  ProbeReport rep;
  rep.name = std::move(name);
  rep.input = std::move(input);
  rep.lhs = lhs;
  rep.rhs = rhs;
  if (rhs > 0.0) {
    rep.ratio = lhs / rhs;
  } else {
    rep.ratio = lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  rep.resolution = "dim=" + std::to_string(grid.dim()) + " n=" + std::to_string(grid.n());
  return rep;
}

double max_ratio(const std::vector<ProbeReport>& reports) {
  double best = 0.0;
  for (const auto& r : reports) best = std::max(best, r.ratio);
  return best;
}

namespace {

void require_velocity(const Grid& grid, int components, const char* what) {
  if (components != grid.dim()) throw InvalidArgument(std::string(what) + " needs a velocity field");
}

void check_field(DerivativeBank& bank, const WeightParams& w, const NormOptions& opts) {
  w.require_admissible(bank.grid().dim());
  if (w.ell > 0.0) require_decaying(bank.get(MultiIndex{}), opts.shell_tolerance);
}

double weighted_l2(std::span<const double> sq_magnitude, const std::vector<double>& weight_sq, double cell) {
  std::vector<double> terms(sq_magnitude.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = weight_sq[i] * sq_magnitude[i];
  return std::sqrt(cell * pairwise_sum(terms));
}

// ||<x>^l d^beta u . grad d^{alpha-beta} u|| with fields from the bank.
double transport_product_norm(DerivativeBank& bank, const MultiIndex& alpha, const MultiIndex& beta,
                              const std::vector<double>& weight_sq) {
  const Grid& g = bank.grid();
  const int dim = g.dim();
  const MultiIndex gamma = alpha - beta;
  const Field& db = bank.get(beta);
  std::array<const Field*, 3> grads{};
  for (int j = 0; j < dim; ++j) grads[static_cast<std::size_t>(j)] = &bank.get(gamma.raised(j));
  std::vector<double> sq(g.points(), 0.0);
  for (int i = 0; i < dim; ++i) {
    for (std::size_t p = 0; p < g.points(); ++p) {
      double v = 0.0;
      for (int j = 0; j < dim; ++j) v += db.component(j)[p] * grads[static_cast<std::size_t>(j)]->component(i)[p];
      sq[p] += v * v;
    }
  }
  return weighted_l2(sq, weight_sq, g.cell_volume());
}

// ||<x>^l grad d^alpha p|| from a scalar bank holding p.
double pressure_gradient_norm(DerivativeBank& pbank, const MultiIndex& alpha, const std::vector<double>& weight_sq) {
  const Grid& g = pbank.grid();
  std::vector<double> sq(g.points(), 0.0);
  for (int i = 0; i < g.dim(); ++i) {
    const auto c = pbank.get(alpha.raised(i)).component(0);
    for (std::size_t p = 0; p < g.points(); ++p) sq[p] += c[p] * c[p];
  }
  return weighted_l2(sq, weight_sq, g.cell_volume());
}

DerivativeBank pressure_bank(const SpectralField& U, int cap) {
  return DerivativeBank(inverse_laplacian(pressure_source(U, U)), cap);
}

std::string pair_label(const MultiIndex& alpha, const MultiIndex& beta, const WeightParams& w) {
  return "alpha=" + alpha.str() + " beta=" + beta.str() + " l=" + csv_number(w.ell);
}

}  // namespace

ProbeReport probe_product_estimate(DerivativeBank& u, const MultiIndex& alpha, const MultiIndex& beta, int r,
                            const WeightParams& w, const NormOptions& opts) {
  require_velocity(u.grid(), u.components(), "product probe");
  if (beta.order() == 0 || !alpha.dominates(beta) || alpha.order() > r) {
    throw InvalidArgument("product probe needs 0 != beta <= alpha and |alpha| <= r");
  }
  if (alpha.order() + 1 > opts.derivative_cap) throw InvalidArgument("derivative order exceeds the configured cap");
  check_field(u, w, opts);
  const double lhs = transport_product_norm(u, alpha, beta, weight_samples(u.grid(), 2.0 * w.ell));
  const double rhs = sobolev_norm(u, r, WeightParams{}, opts) * sobolev_norm(u, r, w, opts);
  return make_report("product_estimate", pair_label(alpha, beta, w), lhs, rhs, u.grid());
}

std::vector<ProbeReport> sweep_product_estimate(const Field& u, int r, const WeightParams& w, const NormOptions& opts) {
  require_velocity(u.grid(), u.components(), "product sweep");
  if (r + 1 > opts.derivative_cap) throw InvalidArgument("derivative order exceeds the configured cap");
  DerivativeBank bank(u, opts.derivative_cap);
  check_field(bank, w, opts);
  const double rhs = sobolev_norm(bank, r, WeightParams{}, opts) * sobolev_norm(bank, r, w, opts);
  bank.prefetch(MultiIndex::enumerate_range(u.grid().dim(), 0, r));
  const auto weight_sq = weight_samples(u.grid(), 2.0 * w.ell);
  std::vector<ProbeReport> out;
  for (const auto& alpha : MultiIndex::enumerate_range(u.grid().dim(), 1, r)) {
    for (const auto& beta : MultiIndex::below(alpha)) {
      if (beta.order() == 0) continue;
      const double lhs = transport_product_norm(bank, alpha, beta, weight_sq);
      out.push_back(make_report("product_estimate", pair_label(alpha, beta, w), lhs, rhs, u.grid()));
    }
  }
  return out;
}

std::vector<ProbeReport> sweep_pressure_estimate(const Field& u, int r, const WeightParams& w, const NormOptions& opts) {
  require_velocity(u.grid(), u.components(), "pressure sweep");
  if (r + 1 > opts.derivative_cap) throw InvalidArgument("derivative order exceeds the configured cap");
  DerivativeBank bank(u, opts.derivative_cap);
  check_field(bank, w, opts);
  const double rhs = sobolev_norm(bank, r, WeightParams{}, opts) * sobolev_norm(bank, r, w, opts);
  DerivativeBank pbank = pressure_bank(bank.spectrum(), opts.derivative_cap);
  const auto weight_sq = weight_samples(u.grid(), 2.0 * w.ell);
  std::vector<ProbeReport> out;
  for (const auto& alpha : MultiIndex::enumerate_range(u.grid().dim(), 1, r)) {
    const double lhs = pressure_gradient_norm(pbank, alpha, weight_sq);
    out.push_back(make_report("pressure_estimate", "alpha=" + alpha.str() + " l=" + csv_number(w.ell), lhs, rhs, u.grid()));
  }
  return out;
}

ProbeReport probe_gradient_embedding(const Field& u, const WeightParams& w, const NormOptions& opts) {
  DerivativeBank bank(u, opts.derivative_cap);
  check_field(bank, w, opts);
  const Grid& g = u.grid();
  const auto weight = weight_samples(g, w.ell);
  double lhs = 0.0;
  std::vector<double> sq(g.points(), 0.0);
  for (int j = 0; j < g.dim(); ++j) {
    MultiIndex e;
    e = e.raised(j);
    const Field& d = bank.get(e);
    for (int c = 0; c < d.components(); ++c) {
      for (std::size_t p = 0; p < g.points(); ++p) sq[p] += d.component(c)[p] * d.component(c)[p];
    }
  }
  for (std::size_t p = 0; p < g.points(); ++p) lhs = std::max(lhs, weight[p] * std::sqrt(sq[p]));
  const double rhs = sobolev_norm(bank, 3, w, opts);
  return make_report("gradient_embedding", "l=" + csv_number(w.ell), lhs, rhs, g);
}

ProbeReport probe_gn(const Field& u) {
  const Grid& g = u.grid();
  if (g.dim() != 2 && g.dim() != 3) throw InvalidArgument("Gagliardo-Nirenberg probe needs dim 2 or 3");
  std::vector<double> quartic(g.points());
  for (std::size_t p = 0; p < g.points(); ++p) {
    double mag = 0.0;
    for (int c = 0; c < u.components(); ++c) mag += u.component(c)[p] * u.component(c)[p];
    quartic[p] = mag * mag;
  }
  const double l4 = std::pow(g.cell_volume() * pairwise_sum(quartic), 0.25);
  const SpectralField U = spectral_transform(u);
  const double l2 = spectral_L2(U, MultiIndex{});
  double grad_sq = 0.0;
  for (int j = 0; j < g.dim(); ++j) {
    MultiIndex e;
    grad_sq += std::pow(spectral_L2(U, e.raised(j)), 2);
  }
  const double theta = g.dim() / 4.0;
  const double rhs = std::pow(l2, 1.0 - theta) * std::pow(std::sqrt(grad_sq), theta);
  return make_report("gagliardo_nirenberg", "L4 vs L2^(1-d/4) DL2^(d/4)", l4, rhs, g);
}

std::vector<ProbeReport> sweep_cz(const Field& u, const WeightParams& w, const NormOptions& opts) {
  std::vector<ProbeReport> out;
  for (int c = 0; c < u.components(); ++c) {
    Field f(u.grid(), 1);
    std::copy(u.component(c).begin(), u.component(c).end(), f.component(0).begin());
    const double ratio = cz_ratio(f, w, opts);
    out.push_back(make_report("calderon_zygmund", "component=" + std::to_string(c) + " l=" + csv_number(w.ell), ratio,
                              1.0, u.grid()));
  }
  return out;
}

namespace {

struct CancellationSetup {
  DerivativeBank bank;
  std::vector<double> weight;
  double hrl = 0.0;
  double sup = 0.0;
};

CancellationSetup prepare_cancellation(const Field& u, int r, const WeightParams& w, const NormOptions& opts) {
  require_velocity(u.grid(), u.components(), "cancellation probe");
  if (divergence_max(u) > 1e-8 * std::max(1.0, weighted_sup(u, WeightParams{}, opts))) {
    throw InvalidArgument("cancellation probe needs a divergence-free field");
  }
  if (r + 1 > opts.derivative_cap) throw InvalidArgument("derivative order exceeds the configured cap");
  CancellationSetup setup{DerivativeBank(u, opts.derivative_cap), weight_samples(u.grid(), w.ell), 0.0, 0.0};
  check_field(setup.bank, w, opts);
  setup.hrl = sobolev_norm(setup.bank, r, w, opts);
  for (std::size_t p = 0; p < u.grid().points(); ++p) {
    double mag = 0.0;
    for (int c = 0; c < u.components(); ++c) mag += u.component(c)[p] * u.component(c)[p];
    setup.sup = std::max(setup.sup, std::sqrt(mag));
  }
  return setup;
}

CancellationReport cancellation_at(CancellationSetup& setup, const Field& u, const MultiIndex& alpha,
                                   const WeightParams& w) {
  const Grid& g = u.grid();
  const int dim = g.dim();
  DerivativeBank& bank = setup.bank;
  const auto& weight = setup.weight;
  const Field& da = bank.get(alpha);
  const double cell = g.cell_volume();

  // |<<x>^l u . grad d^alpha u, <x>^l d^alpha u>|
  std::vector<double> terms(g.points(), 0.0);
  for (int j = 0; j < dim; ++j) {
    const Field& dj = bank.get(alpha.raised(j));
    for (int c = 0; c < dim; ++c) {
      for (std::size_t p = 0; p < g.points(); ++p) {
        terms[p] += weight[p] * weight[p] * u.component(j)[p] * dj.component(c)[p] * da.component(c)[p];
      }
    }
  }
  CancellationReport rep;
  rep.bound = make_report("cancellation", "alpha=" + alpha.str() + " l=" + csv_number(w.ell),
                          std::abs(cell * pairwise_sum(terms)), setup.sup * setup.hrl * setup.hrl, g);

  // <u . grad w, w> with w = <x>^l d^alpha u, grad w taken spectrally.
  const Field wa = apply_weight(da, w, 1);
  DerivativeBank wbank(wa, 1);
  std::fill(terms.begin(), terms.end(), 0.0);
  for (int j = 0; j < dim; ++j) {
    const Field& dw = wbank.get(MultiIndex{}.raised(j));
    for (int c = 0; c < dim; ++c) {
      for (std::size_t p = 0; p < g.points(); ++p) terms[p] += u.component(j)[p] * dw.component(c)[p] * wa.component(c)[p];
    }
  }
  rep.residual = std::abs(cell * pairwise_sum(terms));
  std::fill(terms.begin(), terms.end(), 0.0);
  for (int c = 0; c < dim; ++c) {
    for (std::size_t p = 0; p < g.points(); ++p) terms[p] += wa.component(c)[p] * wa.component(c)[p];
  }
  rep.w_norm_sq = cell * pairwise_sum(terms);
  return rep;
}

}  // namespace

CancellationReport probe_cancellation(const Field& u, const MultiIndex& alpha, int r, const WeightParams& w,
                                      const NormOptions& opts) {
  if (alpha.order() > r) throw InvalidArgument("cancellation probe needs |alpha| <= r");
  auto setup = prepare_cancellation(u, r, w, opts);
  return cancellation_at(setup, u, alpha, w);
}

double max_cancellation_residual(const Field& u, int r, const WeightParams& w, const NormOptions& opts) {
  auto setup = prepare_cancellation(u, r, w, opts);
  double worst = 0.0;
  for (const auto& alpha : MultiIndex::enumerate_range(u.grid().dim(), 1, r)) {
    const auto rep = cancellation_at(setup, u, alpha, w);
    if (rep.w_norm_sq > 0.0) worst = std::max(worst, rep.residual / rep.w_norm_sq);
  }
  return worst;
}

// ---- truncated sums ----

double compute_C_ell(const Field& u, const GevreyParams& g, const WeightParams& w, const NormOptions& opts) {
  require_velocity(u.grid(), u.components(), "C_l");
  g.validate(opts.derivative_cap);
  DerivativeBank bank(u, opts.derivative_cap);
  check_field(bank, w, opts);
  const auto weight_sq = weight_samples(u.grid(), 2.0 * w.ell);
  double total = 0.0;
  for (int m = GevreyParams::kMinOrder; m <= g.m_max; ++m) {
    double inner = 0.0;
    for (const auto& alpha : MultiIndex::enumerate(u.grid().dim(), m)) {
      for (const auto& beta : MultiIndex::below(alpha)) {
        if (beta.order() == 0) continue;
        inner += binomial(alpha, beta) * transport_product_norm(bank, alpha, beta, weight_sq);
      }
    }
    total += gevrey_weight(g.tau, m - 3, m - 3, g.s) * inner;
  }
  return total;
}

double compute_P_ell(const Field& u, const GevreyParams& g, const WeightParams& w, const NormOptions& opts) {
  require_velocity(u.grid(), u.components(), "P_l");
  g.validate(opts.derivative_cap);
  if (g.m_max + 1 > opts.derivative_cap) throw InvalidArgument("derivative order exceeds the configured cap");
  DerivativeBank bank(u, opts.derivative_cap);
  check_field(bank, w, opts);
  DerivativeBank pbank = pressure_bank(bank.spectrum(), opts.derivative_cap);
  const auto weight_sq = weight_samples(u.grid(), 2.0 * w.ell);
  double total = 0.0;
  for (int m = GevreyParams::kMinOrder; m <= g.m_max; ++m) {
    double inner = 0.0;
    for (const auto& alpha : MultiIndex::enumerate(u.grid().dim(), m)) {
      inner += pressure_gradient_norm(pbank, alpha, weight_sq);
    }
    total += gevrey_weight(g.tau, m - 3, m - 3, g.s) * inner;
  }
  return total;
}

GevreyBoundReport gevrey_bounds(const Field& u, const GevreyParams& g, const WeightParams& w, int r,
                                const NormOptions& opts) {
  GevreyBoundReport rep;
  rep.C_ell = compute_C_ell(u, g, w, opts);
  rep.P_ell = compute_P_ell(u, g, w, opts);
  DerivativeBank bank(u, opts.derivative_cap);
  const double hr = sobolev_norm(bank, r, WeightParams{}, opts);
  const double hrl = sobolev_norm(bank, r, w, opts);
  const double X = x_norm(gevrey_series(bank, g.m_max, WeightParams{}, opts), g).value;
  const double Y = y_norm(gevrey_series(bank, g.m_max, w, opts), g).value;
  const double t = g.tau;
  rep.C_ell_bracket = hrl * hrl * (1.0 + t * t) + t * hr * Y + std::pow(t, 1.5) * X * Y + (t * t + t * t * t) * hr * Y;
  rep.P_ell_bracket = hrl * hrl + t * hr * (hrl + Y) + std::pow(t, 1.5) * X * Y + t * t * hr * (hrl + Y) +
                      t * t * t * hr * Y;
  rep.C_ell_ratio = rep.C_ell_bracket > 0.0 ? rep.C_ell / rep.C_ell_bracket : 0.0;
  rep.P_ell_ratio = rep.P_ell_bracket > 0.0 ? rep.P_ell / rep.P_ell_bracket : 0.0;
  return rep;
}

LabConstants calibrate_constants(const std::vector<Field>& family, int r, const WeightParams& w,
                                 const NormOptions& opts) {
  if (family.empty()) throw InvalidArgument("calibration needs at least one field");
  LabConstants c;
  for (const auto& u : family) {
    c.product = std::max(c.product, max_ratio(sweep_product_estimate(u, r, w, opts)));
    c.pressure = std::max(c.pressure, max_ratio(sweep_pressure_estimate(u, r, w, opts)));
  }
  c.calibrated_C = 2.0 * std::max(c.product, c.pressure);
  return c;
}

void write_probe_csv(std::ostream& out, const std::vector<ProbeReport>& reports) {
  write_csv_row(out, {"name", "input", "lhs", "rhs", "ratio", "resolution"});
  for (const auto& r : reports) {
    write_csv_row(out, {r.name, r.input, csv_number(r.lhs), csv_number(r.rhs), csv_number(r.ratio), r.resolution});
  }
}

}  // namespace gevrey

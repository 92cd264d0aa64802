#include "gevrey/picard.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "gevrey/csv.hpp"
#include "gevrey/error.hpp"
#include "gevrey/pressure.hpp"

namespace gevrey {

SpectralField transport_term(const SpectralField& v, const SpectralField& w) {
  SpectralField out = advection(w, v);
  out *= -1.0;
  return out;
}

SpectralField modified_rhs(const SpectralField& v, const SpectralField& w) {
  if (!(v.grid() == w.grid())) throw InvalidArgument("modified_rhs: fields live on different grids");
  SpectralField out = transport_term(v, w);
  out -= bilinear_pressure_gradient(w, w);
  return out;
}

Field modified_rhs(const Field& v, const Field& w) {
  if (!(v.grid() == w.grid())) throw InvalidArgument("modified_rhs: fields live on different grids");
  return inverse_transform(modified_rhs(spectral_transform(v), spectral_transform(w)));
}

void PicardConfig::validate() const {
  if (!(T > 0.0)) throw InvalidArgument("Picard horizon T must be positive");
  if (n_iters < 1) throw InvalidArgument("need at least one Picard iteration");
  if (samples < 1 || steps < 3 || steps % samples != 0) {
    throw InvalidArgument("RK steps must be >= 3 and a multiple of the sample count");
  }
  if (r < 1 || r > norm_options.derivative_cap) throw InvalidArgument("Sobolev order r must lie in [1, derivative cap]");
  if (!(C >= 0.0)) throw InvalidArgument("bound constant C must be nonnegative");
  if (!(evolved_shell_tolerance > 0.0)) throw InvalidArgument("evolved shell tolerance must be positive");
}

namespace {

SpectralField combine(const std::vector<const SpectralField*>& fields, const std::vector<double>& weights) {
  SpectralField out = *fields[0];
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    std::complex<double> acc = 0.0;
    for (std::size_t f = 0; f < fields.size(); ++f) acc += weights[f] * fields[f]->values()[i];
    dst[i] = acc;
  }
  return out;
}

// Value at step midpoint k + 1/2 from the cubic through four neighbouring nodes.
SpectralField midpoint(const std::vector<SpectralField>& nodes, int k) {
  const int last = static_cast<int>(nodes.size()) - 1;
  const int first = std::clamp(k - 1, 0, last - 3);
  const double x = k + 0.5;
  std::vector<const SpectralField*> stencil;
  std::vector<double> weights;
  for (int j = first; j < first + 4; ++j) {
    double w = 1.0;
    for (int m = first; m < first + 4; ++m) {
      if (m != j) w *= (x - m) / static_cast<double>(j - m);
    }
    stencil.push_back(&nodes[static_cast<std::size_t>(j)]);
    weights.push_back(w);
  }
  return combine(stencil, weights);
}

SpectralField axpy(const SpectralField& u, double a, const SpectralField& k) {
  SpectralField out = u;
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += a * k.values()[i];
  return out;
}

SpectralField transport_step(const SpectralField& v, double dt, const SpectralField& w0, const SpectralField& wm,
                             const SpectralField& w1, const SpectralField& g0, const SpectralField& gm,
                             const SpectralField& g1) {
  const auto rhs = [](const SpectralField& x, const SpectralField& w, const SpectralField& g) {
    SpectralField out = transport_term(x, w);
    out -= g;
    return out;
  };
  const SpectralField k1 = rhs(v, w0, g0);
  const SpectralField k2 = rhs(axpy(v, 0.5 * dt, k1), wm, gm);
  const SpectralField k3 = rhs(axpy(v, 0.5 * dt, k2), wm, gm);
  const SpectralField k4 = rhs(axpy(v, dt, k3), w1, g1);
  SpectralField next = v;
  auto dst = next.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] += dt / 6.0 * (k1.values()[i] + 2.0 * k2.values()[i] + 2.0 * k3.values()[i] + k4.values()[i]);
  }
  dealias_in_place(next);
  return next;
}

double log_factorial_shifted(int n) { return log_factorial(n + 1); }

}  // namespace

ContractionFit fit_contraction(const std::vector<double>& e, double floor) {
  ContractionFit fit;
  for (int n = 0; n < static_cast<int>(e.size()); ++n) {
    if (e[static_cast<std::size_t>(n)] > floor && std::isfinite(std::log(e[static_cast<std::size_t>(n)]))) {
      fit.used.push_back(n);
    }
  }
  if (fit.used.size() < 4) throw InvalidArgument("contraction fit needs at least 4 usable differences");
  Eigen::MatrixXd A(static_cast<Eigen::Index>(fit.used.size()), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(fit.used.size()));
  for (std::size_t i = 0; i < fit.used.size(); ++i) {
    const int n = fit.used[i];
    const auto row = static_cast<Eigen::Index>(i);
    A(row, 0) = 1.0;
    A(row, 1) = n + 1.0;
    A(row, 2) = -log_factorial_shifted(n);
    y(row) = std::log(e[static_cast<std::size_t>(n)]);
  }
  const Eigen::VectorXd p = A.colPivHouseholderQr().solve(y);
  fit.a = p(0);
  fit.b = p(1);
  fit.c = p(2);
  fit.rms_residual = std::sqrt((A * p - y).squaredNorm() / static_cast<double>(fit.used.size()));
  return fit;
}

PicardState run_picard(const Field& u0, const PicardConfig& cfg) {
  cfg.validate();
  const SpectralField U0 = dealias(spectral_transform(u0));
  DerivativeBank bank0(U0, cfg.norm_options.derivative_cap);
  PicardState state{{}, 0.0, {}, {}, false, U0};
  state.u0_norm = sobolev_norm(bank0, cfg.r, cfg.weight, cfg.norm_options);
  if (cfg.C > 0.0 && 1.0 - 2.0 * cfg.C * cfg.T * state.u0_norm <= 0.0) {
    throw InvalidArgument("Picard horizon too long: 1 - 2 C T ||u0|| must stay positive");
  }

  const double dt = cfg.T / cfg.steps;
  const int stride = cfg.steps / cfg.samples;
  for (int j = 0; j <= cfg.samples; ++j) state.sample_times.push_back(j * stride * dt);

  NormOptions evolved_opts = cfg.norm_options;
  evolved_opts.shell_tolerance = cfg.evolved_shell_tolerance;
  // Differences of iterates are dominated by the pressure tail relative to
  // their small core, so only the iterates themselves are shell-checked.
  NormOptions diff_opts = cfg.norm_options;
  diff_opts.shell_tolerance = 1.0;

  std::vector<SpectralField> previous(static_cast<std::size_t>(cfg.steps) + 1, U0);
  for (int n = 0; n < cfg.n_iters; ++n) {
    std::vector<SpectralField> gradients;
    gradients.reserve(previous.size());
    for (const auto& w : previous) gradients.push_back(bilinear_pressure_gradient(w, w));

    std::vector<SpectralField> next;
    next.reserve(previous.size());
    next.push_back(U0);
    for (int k = 0; k < cfg.steps; ++k) {
      const SpectralField wm = midpoint(previous, k);
      const SpectralField gm = bilinear_pressure_gradient(wm, wm);
      const auto ks = static_cast<std::size_t>(k);
      next.push_back(transport_step(next.back(), dt, previous[ks], wm, previous[ks + 1], gradients[ks], gm,
                                    gradients[ks + 1]));
    }

    PicardIteration it;
    it.n = n;
    for (int j = 0; j <= cfg.samples; ++j) {
      const auto node = static_cast<std::size_t>(j * stride);
      const Field current = inverse_transform(next[node]);
      if (!current.all_finite()) throw NumericalError("non-finite Picard iterate at n = " + std::to_string(n + 1));
      DerivativeBank bank(next[node], cfg.norm_options.derivative_cap);
      const double norm = sobolev_norm(bank, cfg.r, cfg.weight, evolved_opts);
      it.sup_norm = std::max(it.sup_norm, norm);
      if (cfg.C > 0.0) {
        const double t = state.sample_times[static_cast<std::size_t>(j)];
        const double bound = state.u0_norm / (1.0 - 2.0 * cfg.C * t * state.u0_norm);
        it.bound_ratio = std::max(it.bound_ratio, norm / bound);
      }
      SpectralField diff = next[node];
      diff -= previous[node];
      DerivativeBank diff_bank(diff, cfg.norm_options.derivative_cap);
      it.e = std::max(it.e, sobolev_norm(diff_bank, cfg.r - 1, cfg.weight, diff_opts));
    }
    it.fit_residual = std::numeric_limits<double>::quiet_NaN();
    state.iterations.push_back(it);
    previous = std::move(next);
  }
  state.final_state = previous.back();

  std::vector<double> e;
  for (const auto& it : state.iterations) e.push_back(it.e);
  // Differences below ~1e-13 of the data are round-off and carry no contraction information.
  const double floor = 1e-13 * state.u0_norm;
  try {
    state.fit = fit_contraction(e, floor);
    state.fit_valid = true;
    for (int n : state.fit.used) {
      auto& it = state.iterations[static_cast<std::size_t>(n)];
      it.fit_residual = std::log(it.e) - (state.fit.a + state.fit.b * (n + 1) - state.fit.c * log_factorial_shifted(n));
    }
  } catch (const InvalidArgument&) {
    state.fit_valid = false;
  }
  return state;
}

void write_picard_csv(std::ostream& out, const PicardState& state) {
  write_csv_row(out, {"n", "sup_bound_value", "e_n", "fit_residual"});
  for (const auto& it : state.iterations) {
    write_csv_row(out, {std::to_string(it.n), csv_number(it.sup_norm), csv_number(it.e), csv_number(it.fit_residual)});
  }
}

}  // namespace gevrey

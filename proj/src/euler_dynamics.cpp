#include "gevrey/euler_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "gevrey/csv.hpp"
#include "gevrey/error.hpp"
#include "gevrey/pressure.hpp"

namespace gevrey {

void SimConfig::validate() const {
  weight.require_admissible(grid.dim());
  if (r < 1 || r > norm_options.derivative_cap) throw InvalidArgument("Sobolev order r must lie in [1, derivative cap]");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (!(t_end >= 0.0)) throw InvalidArgument("t_end must be nonnegative");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw InvalidArgument("cfl_safety must lie in (0, 1]");
  if (monitor_every < 1) throw InvalidArgument("monitor cadence must be at least 1");
  if (m_max < GevreyParams::kMinOrder || m_max > norm_options.derivative_cap) {
    throw InvalidArgument("m_max must lie in [3, derivative cap]");
  }
  if (!(evolved_shell_tolerance > 0.0)) throw InvalidArgument("evolved shell tolerance must be positive");
  if (!(blowup_factor > 1.0)) throw InvalidArgument("blow-up factor must exceed 1");
}

SpectralField euler_rhs(const SpectralField& u) {
  SpectralField n = advection(u, u);
  n *= -1.0;
  return leray_project(n);
}

Field euler_rhs(const Field& u) { return inverse_transform(euler_rhs(spectral_transform(u))); }

namespace {

SpectralField axpy(const SpectralField& u, double a, const SpectralField& k) {
  SpectralField out = u;
  auto dst = out.values();
  const auto src = k.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += a * src[i];
  return out;
}

}  // namespace

SpectralField euler_step(const SpectralField& u, double dt) {
  const SpectralField k1 = euler_rhs(u);
  const SpectralField k2 = euler_rhs(axpy(u, 0.5 * dt, k1));
  const SpectralField k3 = euler_rhs(axpy(u, 0.5 * dt, k2));
  const SpectralField k4 = euler_rhs(axpy(u, dt, k3));
  SpectralField next = u;
  auto dst = next.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] += dt / 6.0 * (k1.values()[i] + 2.0 * k2.values()[i] + 2.0 * k3.values()[i] + k4.values()[i]);
  }
  dealias_in_place(next);
  return leray_project(next);
}

Field euler_step(const Field& u, double dt) { return inverse_transform(euler_step(spectral_transform(u), dt)); }

double cfl_limit(const Field& u, double cfl_safety) {
  double umax = 0.0;
  for (std::size_t i = 0; i < u.grid().points(); ++i) {
    double mag = 0.0;
    for (int c = 0; c < u.components(); ++c) mag += u.component(c)[i] * u.component(c)[i];
    umax = std::max(umax, std::sqrt(mag));
  }
  if (umax == 0.0) return std::numeric_limits<double>::infinity();
  return cfl_safety * u.grid().spacing() / umax;
}

double curl_sup(const SpectralField& u) {
  const Grid& grid = u.grid();
  const int dim = grid.dim();
  SpectralField omega(grid, dim == 3 ? 3 : 1);
  const std::complex<double> i(0.0, 1.0);
  for (std::size_t p = 0; p < grid.points(); ++p) {
    const auto k = derivative_wavevector(grid, p);
    if (dim == 2) {
      omega.component(0)[p] = i * (k[0] * u.component(1)[p] - k[1] * u.component(0)[p]);
      continue;
    }
    omega.component(0)[p] = i * (k[1] * u.component(2)[p] - k[2] * u.component(1)[p]);
    omega.component(1)[p] = i * (k[2] * u.component(0)[p] - k[0] * u.component(2)[p]);
    omega.component(2)[p] = i * (k[0] * u.component(1)[p] - k[1] * u.component(0)[p]);
  }
  const Field w = inverse_transform(omega);
  double best = 0.0;
  for (std::size_t p = 0; p < grid.points(); ++p) {
    double mag = 0.0;
    for (int c = 0; c < w.components(); ++c) mag += w.component(c)[p] * w.component(c)[p];
    best = std::max(best, std::sqrt(mag));
  }
  return best;
}

MonitorRecord measure(const SpectralField& u, double t, double bkm, const SimConfig& cfg,
                      double shell_tolerance) {
  NormOptions opts = cfg.norm_options;
  opts.shell_tolerance = shell_tolerance;
  MonitorRecord rec;
  rec.t = t;
  rec.bkm = bkm;
  rec.energy = spectral_L2(u, MultiIndex{});
  rec.div_max = divergence_max(u);
  DerivativeBank bank(u, opts.derivative_cap);
  rec.shell_fraction = boundary_shell_fraction(bank.get(MultiIndex{}));
  rec.h_r = sobolev_norm(bank, cfg.r, WeightParams{}, opts);
  rec.h_r_l = cfg.weight.ell == 0.0 ? rec.h_r : sobolev_norm(bank, cfg.r, cfg.weight, opts);
  rec.series = gevrey_series(bank, cfg.m_max, cfg.weight, opts);
  return rec;
}

SimResult simulate(const Field& u0, const SimConfig& cfg,
                   const std::function<void(double, const SpectralField&)>& on_step) {
  cfg.validate();
  if (!(u0.grid() == cfg.grid)) throw InvalidArgument("initial data does not live on the configured grid");
  SpectralField u = leray_project(dealias(spectral_transform(u0)));
  SimResult result{{}, u, 0, ""};

  double t = 0.0, bkm = 0.0;
  double curl_prev = curl_sup(u);
  try {
    result.history.push_back(measure(u, t, bkm, cfg, cfg.norm_options.shell_tolerance));
  } catch (const BoundaryShellViolation& e) {
    result.halt_reason = e.what();
    return result;
  }
  const double guard = cfg.blowup_factor * result.history.front().h_r;
  const double finish_eps = 1e-12 * std::max(1.0, cfg.t_end);

  while (cfg.t_end - t > finish_eps) {
    const double dt = std::min({cfg.dt, cfl_limit(inverse_transform(u), cfg.cfl_safety), cfg.t_end - t});
    u = euler_step(u, dt);
    t += dt;
    ++result.steps;
    const double curl_now = curl_sup(u);
    if (!std::isfinite(curl_now)) throw NumericalError("non-finite vorticity at t = " + std::to_string(t));
    bkm += 0.5 * dt * (curl_prev + curl_now);
    curl_prev = curl_now;
    if (on_step) on_step(t, u);

    const bool last = cfg.t_end - t <= finish_eps;
    if (result.steps % cfg.monitor_every != 0 && !last) continue;
    try {
      result.history.push_back(measure(u, t, bkm, cfg, cfg.evolved_shell_tolerance));
    } catch (const BoundaryShellViolation& e) {
      result.halt_reason = e.what();
      break;
    }
    if (result.history.back().h_r > guard) {
      result.halt_reason = "blow-up guard: ||u||_{H^r} exceeded " + std::to_string(cfg.blowup_factor) + "x its initial value";
      break;
    }
  }
  result.final_state = u;
  return result;
}

void write_monitor_csv(std::ostream& out, const std::vector<MonitorRecord>& history, int m_max) {
  std::vector<std::string> header{"t", "energy", "h_r", "h_r_l", "bkm", "div_max", "shell_frac"};
  for (int m = GevreyParams::kMinOrder; m <= m_max; ++m) header.push_back("u_" + std::to_string(m));
  write_csv_row(out, header);
  for (const auto& rec : history) {
    std::vector<std::string> row{csv_number(rec.t),   csv_number(rec.energy),  csv_number(rec.h_r),
                                 csv_number(rec.h_r_l), csv_number(rec.bkm), csv_number(rec.div_max),
                                 csv_number(rec.shell_fraction)};
    for (int m = GevreyParams::kMinOrder; m <= m_max; ++m) {
      row.push_back(csv_number(m <= rec.series.max_order() ? rec.series.entries[static_cast<std::size_t>(m)] : 0.0));
    }
    write_csv_row(out, row);
  }
}

EnergyInequalityReport verify_energy_inequality(const std::vector<MonitorRecord>& history) {
  if (history.size() < 3) throw InvalidArgument("energy inequality check needs at least 3 monitor samples");
  EnergyInequalityReport report;
  const std::size_t n = history.size();
  report.implied_constant.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    const double slope = (history[hi].h_r_l - history[lo].h_r_l) / (history[hi].t - history[lo].t);
    const double scale = history[i].h_r * history[i].h_r_l;
    report.implied_constant[i] = scale > 0.0 ? std::max(0.0, slope) / scale : 0.0;
  }
  report.max_constant = *std::max_element(report.implied_constant.begin(), report.implied_constant.end());
  report.bounded = std::all_of(report.implied_constant.begin(), report.implied_constant.end(),
                               [](double c) { return std::isfinite(c); });
  return report;
}

GronwallReport gronwall_check(const std::vector<MonitorRecord>& history, const EnergyInequalityReport& energy,
                              double tolerance) {
  if (energy.implied_constant.size() != history.size()) throw InvalidArgument("energy report does not match history");
  GronwallReport report;
  report.holds = true;
  double integral = 0.0, running = 0.0;
  const double y0 = history.front().h_r_l;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (i > 0) integral += 0.5 * (history[i].t - history[i - 1].t) * (history[i].h_r + history[i - 1].h_r);
    running = std::max(running, energy.implied_constant[i]);
    const double bound = y0 * std::exp(running * integral);
    report.bound.push_back(bound);
    const double ratio = bound > 0.0 ? history[i].h_r_l / bound : 0.0;
    report.worst_ratio = std::max(report.worst_ratio, ratio);
    if (history[i].h_r_l > bound * (1.0 + tolerance)) report.holds = false;
  }
  return report;
}

}  // namespace gevrey

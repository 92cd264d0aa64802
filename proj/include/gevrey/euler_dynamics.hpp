#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gevrey/field.hpp"
#include "gevrey/norms.hpp"

namespace gevrey {

struct SimConfig {
  Grid grid{3, 64, 4.0 * 3.141592653589793};
  WeightParams weight{};
  int r = 5;
  double dt = 0.01;
  double t_end = 1.0;
  double cfl_safety = 0.5;
  /// Monitors are recorded every `monitor_every` steps and at t_end.
  int monitor_every = 10;
  int m_max = 8;
  /// Abort when ||u||_{H^r} exceeds this multiple of its initial value.
  double blowup_factor = 100.0;
  /// Derivative cap and the shell tolerance applied to u0. The pressure gives
  /// any evolving vortex an algebraic velocity tail of order t |x|^-4, so the
  /// static 1e-8 tolerance cannot hold for t > 0; evolved states are checked
  /// against `evolved_shell_tolerance` instead.
  NormOptions norm_options{};
  double evolved_shell_tolerance = 1e-3;

  void validate() const;
};

struct MonitorRecord {
  double t = 0.0;
  double energy = 0.0;  // ||u||_{L^2}
  double h_r = 0.0;
  double h_r_l = 0.0;
  /// Accumulated int_0^t ||curl u||_{L^inf} (trapezoid over steps).
  double bkm = 0.0;
  double div_max = 0.0;
  double shell_fraction = 0.0;
  GevreySeries series;
};

/// -P[(u . grad) u] with the 2/3 rule applied to the product.
SpectralField euler_rhs(const SpectralField& u);
Field euler_rhs(const Field& u);

/// One classical RK4 step; every stage is dealiased and projected.
SpectralField euler_step(const SpectralField& u, double dt);
Field euler_step(const Field& u, double dt);

/// Largest stable step cfl_safety * h / max|u| (infinite for u = 0).
double cfl_limit(const Field& u, double cfl_safety);

/// max over samples of |curl u|.
double curl_sup(const SpectralField& u);

MonitorRecord measure(const SpectralField& u, double t, double bkm, const SimConfig& cfg,
                      double shell_tolerance);

struct SimResult {
  std::vector<MonitorRecord> history;
  SpectralField final_state;
  int steps = 0;
  /// Empty when the run reached t_end.
  std::string halt_reason;
  bool completed() const { return halt_reason.empty(); }
};

/// Integrates from u0 (projected and dealiased first) to cfg.t_end. Each step
/// uses min(dt, CFL limit, remaining time). A shell violation (l > 0) or the
/// blow-up guard halts the run; non-finite values throw NumericalError.
/// `on_step(t, u)` is called after every accepted step.
SimResult simulate(const Field& u0, const SimConfig& cfg,
                   const std::function<void(double, const SpectralField&)>& on_step = {});

/// Column order: t, energy, h_r, h_r_l, bkm, div_max, shell_frac, u_3 .. u_{m_max}.
void write_monitor_csv(std::ostream& out, const std::vector<MonitorRecord>& history, int m_max);

struct EnergyInequalityReport {
  /// C(t) = max(0, d/dt ||u||_{H^r_l}) / (||u||_{H^r} ||u||_{H^r_l}) per sample.
  std::vector<double> implied_constant;
  double max_constant = 0.0;
  bool bounded = false;
};

/// Finite-difference check of d/dt ||u||_{H^r_l} <= C ||u||_{H^r} ||u||_{H^r_l}.
/// Needs at least 3 samples.
EnergyInequalityReport verify_energy_inequality(const std::vector<MonitorRecord>& history);

struct GronwallReport {
  /// ||u0||_{H^r_l} exp(C(t) int_0^t ||u||_{H^r}) with C(t) the running max
  /// of the implied constant.
  std::vector<double> bound;
  /// Largest value of ||u(t)||_{H^r_l} / bound(t).
  double worst_ratio = 0.0;
  bool holds = false;
};

GronwallReport gronwall_check(const std::vector<MonitorRecord>& history, const EnergyInequalityReport& energy,
                              double tolerance = 1e-6);

}  // namespace gevrey

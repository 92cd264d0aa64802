#pragma once

#include <iosfwd>
#include <vector>

#include "gevrey/euler_dynamics.hpp"
#include "gevrey/field.hpp"

namespace gevrey {

/// Norm histories on a common, strictly increasing time grid starting at 0.
/// Values between samples are taken piecewise linear.
struct NormTrajectory {
  std::vector<double> t;
  std::vector<double> h_r;    // ||u||_{H^r}
  std::vector<double> h_r_l;  // ||u||_{H^r_l}
  double x0 = 0.0;            // ||u0||_{X_{tau0,l}}

  void validate() const;
  static NormTrajectory from_history(const std::vector<MonitorRecord>& history, double x0);
};

struct RadiusState {
  double C = 0.0;
  double tau0 = 0.0;
  double c_prime = 0.0;  // tau0^{1/2} + tau0^{3/2}
  double c_tau0 = 0.0;   // 1 + tau0^2
  std::vector<double> t;
  std::vector<double> tau;
  /// H(t) = x0 + c_tau0 int_0^t ||u||_{H^r_l}^2.
  std::vector<double> H;
  /// |tau(t_{k+1}) - tau(t_k) + int F| / tau0 per interval, with F the left
  /// side of the ODE minus tau'; zero at t = 0.
  std::vector<double> residual;
  bool collapsed = false;
  double collapse_time = 0.0;
};

/// RK4 for tau' + 2 C tau ||u||_{H^r} + 2 C tau^{3/2} (c_prime ||u||_{H^r_l} + H) = 0
/// with at least `substeps` equal steps per sample interval, more where the
/// local stiffness 2 C ||u||_{H^r} + 3 C tau^{1/2} (...) needs them. H uses the
/// trapezoid rule on ||u||_{H^r_l}^2, continued linearly between samples.
/// The exact tau never reaches zero, so collapse means tau falling to
/// `collapse_fraction` * tau0 (or a non-finite step); samples stop there.
RadiusState integrate_tau(const NormTrajectory& traj, double C, double tau0, int substeps = 16,
                          double collapse_fraction = 1e-12);

/// (1 - C ||u0||_{H^r} t)^2 / (C0 (1 + t)^4). Throws outside 0 <= t < 1/(C ||u0||).
double lower_bound_tau(double t, double C, double C0, double u0_hr_norm);

/// Smallest C0 with (tau0^{-1/2} + C int_0^t (c_prime ||u||_{H^r_l} + H)) <= sqrt(C0) (1 + t)^2
/// at every sample. This is the inequality that turns the solution formula into
/// the lower bound; at t = 0 it reduces to C0 >= 1 / tau0.
double calibrate_C0(const NormTrajectory& traj, double C, double tau0);

/// Norms following ||u(t)|| = ||u0|| / (1 - C t ||u0||_{H^r}) for both norms,
/// sampled at `samples` + 1 points of [0, fraction / (C ||u0||_{H^r})].
NormTrajectory model_trajectory(double u0_hr, double u0_hrl, double x0, double C, double fraction, int samples);

struct LowerBoundReport {
  std::vector<double> bound;  // NaN outside the positivity window
  double worst_ratio = 0.0;   // max bound / tau over checked samples
  int checked = 0;
  bool holds = false;
};

LowerBoundReport check_lower_bound(const RadiusState& state, double C0, double u0_hr_norm);

/// ||u(t)||_{X_{tau(t),l}} <= H(t) along a simulation whose monitor history
/// produced `state`.
struct XNormReport {
  std::vector<double> x_norm;
  double worst_ratio = 0.0;
  bool holds = false;
};

XNormReport check_x_norm_bound(const std::vector<MonitorRecord>& history, const RadiusState& state, double s,
                               double tolerance = 1e-6);

struct SpectrumFit {
  double s = 1.0;
  /// Shell representatives |k| and shell-maximum amplitudes used by the fit.
  std::vector<double> k;
  std::vector<double> amplitude;
  double log_A = 0.0;
  double sigma = 0.0;  // algebraic prefactor exponent
  double tau_fit = 0.0;
  double rms_residual = 0.0;
  /// tau_fit <= 0, or the fitted model drops by less than one e-fold (or less
  /// than three residuals) across the band.
  bool non_decaying = false;
};

/// Shell-maximum amplitudes of F over shells floor(|k| L / pi), excluding
/// k = 0 and shells beyond the 2/3 cutoff, fitted as
/// log a = log A - sigma log k - tau k^{1/s} over shells with relative amplitude
/// above 1e-13. Needs at least 6 such shells.
SpectrumFit fit_radius(const SpectralField& F, double s);

/// Fit on given (k, a) pairs; same model and thresholds.
SpectrumFit fit_radius(const std::vector<double>& k, const std::vector<double>& amplitude, double s);

/// Columns: t, tau, tau_lower_bound, tau_fit, H, residual. `tau_fit` may be
/// empty or hold NaN where no snapshot was fitted.
void write_radius_csv(std::ostream& out, const RadiusState& state, const std::vector<double>& lower_bound,
                      const std::vector<double>& tau_fit);

}  // namespace gevrey

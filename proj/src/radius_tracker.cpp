#include "gevrey/radius_tracker.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "gevrey/csv.hpp"
#include "gevrey/error.hpp"
#include "gevrey/norms.hpp"

namespace gevrey {

void NormTrajectory::validate() const {
  if (t.size() < 2) throw InvalidArgument("norm trajectory needs at least two samples");
  if (h_r.size() != t.size() || h_r_l.size() != t.size()) {
    throw InvalidArgument("norm trajectories must share the time grid");
  }
  if (t.front() != 0.0) throw InvalidArgument("norm trajectory must start at t = 0");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw InvalidArgument("norm trajectory times must increase strictly");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(h_r[i] >= 0.0) || !(h_r_l[i] >= 0.0)) throw InvalidArgument("norms must be finite and nonnegative");
  }
  if (!(x0 >= 0.0)) throw InvalidArgument("initial X norm must be nonnegative");
}

NormTrajectory NormTrajectory::from_history(const std::vector<MonitorRecord>& history, double x0) {
  NormTrajectory traj;
  for (const auto& rec : history) {
    traj.t.push_back(rec.t);
    traj.h_r.push_back(rec.h_r);
    traj.h_r_l.push_back(rec.h_r_l);
  }
  traj.x0 = x0;
  return traj;
}

namespace {

// Linear data on one sample interval, with H carried in closed form.
struct Interval {
  double t0, width;
  double a0, a1;  // ||u||_{H^r}
  double l0, l1;  // ||u||_{H^r_l}
  double H0;      // H at t0
  double c_tau0;

  double frac(double t) const { return (t - t0) / width; }
  double a(double t) const { return a0 + (a1 - a0) * frac(t); }
  double l(double t) const { return l0 + (l1 - l0) * frac(t); }
  double H(double t) const {
    const double d = t - t0;
    const double q0 = l0 * l0, q1 = l1 * l1;
    return H0 + c_tau0 * (q0 * d + (q1 - q0) * d * d / (2.0 * width));
  }
  double H_end() const { return H(t0 + width); }
  // int_{t0}^{t0 + width} H
  double H_integral() const {
    const double q0 = l0 * l0, q1 = l1 * l1;
    return H0 * width + c_tau0 * (q0 * width * width / 2.0 + (q1 - q0) * width * width / 6.0);
  }
};

Interval interval(const NormTrajectory& traj, std::size_t k, double H0, double c_tau0) {
  return {traj.t[k], traj.t[k + 1] - traj.t[k], traj.h_r[k], traj.h_r[k + 1], traj.h_r_l[k], traj.h_r_l[k + 1],
          H0, c_tau0};
}

}  // namespace

RadiusState integrate_tau(const NormTrajectory& traj, double C, double tau0, int substeps,
                          double collapse_fraction) {
  traj.validate();
  if (!(C >= 0.0)) throw InvalidArgument("radius constant C must be nonnegative");
  if (!(tau0 > 0.0)) throw InvalidArgument("initial radius must be positive");
  if (substeps < 2 || substeps % 2 != 0) throw InvalidArgument("substeps must be even and at least 2");
  if (!(collapse_fraction >= 0.0 && collapse_fraction < 1.0)) throw InvalidArgument("collapse fraction must lie in [0, 1)");

  RadiusState st;
  st.C = C;
  st.tau0 = tau0;
  st.c_prime = std::sqrt(tau0) + std::pow(tau0, 1.5);
  st.c_tau0 = 1.0 + tau0 * tau0;
  st.t.push_back(0.0);
  st.tau.push_back(tau0);
  st.H.push_back(traj.x0);
  st.residual.push_back(0.0);

  std::vector<double> tau_sub, rate_sub;
  for (std::size_t k = 0; k + 1 < traj.t.size(); ++k) {
    const Interval iv = interval(traj, k, st.H.back(), st.c_tau0);
    const auto rate = [&](double t, double tau) {
      return -2.0 * C * tau * iv.a(t) - 2.0 * C * std::pow(tau, 1.5) * (st.c_prime * iv.l(t) + iv.H(t));
    };
    double tau = st.tau.back();
    // Keep h * lambda <= 0.025 for the local rate lambda = -dF/dtau.
    const double lambda = 2.0 * C * std::max(iv.a0, iv.a1) +
                          3.0 * C * std::sqrt(tau) * (st.c_prime * std::max(iv.l0, iv.l1) + iv.H_end());
    const double wanted = std::min(std::ceil(lambda * iv.width / 0.05) * 2.0, 4.0e6);
    const int m = std::max(substeps, static_cast<int>(wanted));
    const double h = iv.width / m;
    tau_sub.assign(static_cast<std::size_t>(m) + 1, 0.0);
    rate_sub.assign(static_cast<std::size_t>(m) + 1, 0.0);
    tau_sub[0] = tau;
    rate_sub[0] = rate(iv.t0, tau);
    for (int j = 0; j < m; ++j) {
      const double t = iv.t0 + j * h;
      const double k1 = rate(t, tau);
      const double y2 = tau + 0.5 * h * k1;
      const double k2 = y2 > 0.0 ? rate(t + 0.5 * h, y2) : std::numeric_limits<double>::quiet_NaN();
      const double y3 = tau + 0.5 * h * k2;
      const double k3 = y3 > 0.0 ? rate(t + 0.5 * h, y3) : std::numeric_limits<double>::quiet_NaN();
      const double y4 = tau + h * k3;
      const double k4 = y4 > 0.0 ? rate(t + h, y4) : std::numeric_limits<double>::quiet_NaN();
      const double next = tau + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!std::isfinite(next) || next <= collapse_fraction * tau0) {
        st.collapsed = true;
        st.collapse_time = t;
        return st;
      }
      tau = next;
      tau_sub[static_cast<std::size_t>(j) + 1] = tau;
      rate_sub[static_cast<std::size_t>(j) + 1] = rate(t + h, tau);
    }
    // Simpson over substep pairs.
    double integral = 0.0;
    for (int j = 0; j < m; j += 2) {
      const auto u = static_cast<std::size_t>(j);
      integral += h / 3.0 * (rate_sub[u] + 4.0 * rate_sub[u + 1] + rate_sub[u + 2]);
    }
    st.residual.push_back(std::abs(tau - st.tau.back() - integral) / tau0);
    st.t.push_back(traj.t[k + 1]);
    st.tau.push_back(tau);
    st.H.push_back(iv.H_end());
  }
  return st;
}

double lower_bound_tau(double t, double C, double C0, double u0_hr_norm) {
  if (!(C0 > 0.0)) throw InvalidArgument("C0 must be positive");
  if (!(C >= 0.0) || !(u0_hr_norm >= 0.0)) throw InvalidArgument("C and ||u0|| must be nonnegative");
  const double q = 1.0 - C * u0_hr_norm * t;
  if (t < 0.0 || q <= 0.0) throw InvalidArgument("t lies outside the positivity window of the lower bound");
  return q * q / (C0 * std::pow(1.0 + t, 4));
}

double calibrate_C0(const NormTrajectory& traj, double C, double tau0) {
  traj.validate();
  if (!(tau0 > 0.0)) throw InvalidArgument("initial radius must be positive");
  const double c_prime = std::sqrt(tau0) + std::pow(tau0, 1.5);
  const double c_tau0 = 1.0 + tau0 * tau0;
  const double sigma0 = 1.0 / std::sqrt(tau0);
  double best = sigma0 * sigma0;
  double H = traj.x0, B = 0.0;  // B = int_0^t (c_prime ||u||_{H^r_l} + H)
  for (std::size_t k = 0; k + 1 < traj.t.size(); ++k) {
    const Interval iv = interval(traj, k, H, c_tau0);
    B += c_prime * 0.5 * (iv.l0 + iv.l1) * iv.width + iv.H_integral();
    H = iv.H_end();
    const double root = (sigma0 + C * B) / std::pow(1.0 + traj.t[k + 1], 2);
    best = std::max(best, root * root);
  }
  return best;
}

NormTrajectory model_trajectory(double u0_hr, double u0_hrl, double x0, double C, double fraction, int samples) {
  if (!(u0_hr > 0.0) || !(C > 0.0)) throw InvalidArgument("model trajectory needs positive C and ||u0||");
  if (!(fraction > 0.0 && fraction < 1.0) || samples < 1) {
    throw InvalidArgument("model trajectory needs 0 < fraction < 1 and at least one interval");
  }
  NormTrajectory traj;
  traj.x0 = x0;
  const double t_end = fraction / (C * u0_hr);
  for (int i = 0; i <= samples; ++i) {
    const double t = t_end * i / samples;
    const double growth = 1.0 / (1.0 - C * u0_hr * t);
    traj.t.push_back(t);
    traj.h_r.push_back(u0_hr * growth);
    traj.h_r_l.push_back(u0_hrl * growth);
  }
  return traj;
}

LowerBoundReport check_lower_bound(const RadiusState& state, double C0, double u0_hr_norm) {
  LowerBoundReport rep;
  const double window = state.C * u0_hr_norm > 0.0 ? 1.0 / (state.C * u0_hr_norm)
                                                   : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.t.size(); ++i) {
    if (state.t[i] >= window) {
      rep.bound.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double b = lower_bound_tau(state.t[i], state.C, C0, u0_hr_norm);
    rep.bound.push_back(b);
    rep.worst_ratio = std::max(rep.worst_ratio, b / state.tau[i]);
    ++rep.checked;
  }
  rep.holds = rep.checked > 0 && rep.worst_ratio <= 1.0;
  return rep;
}

XNormReport check_x_norm_bound(const std::vector<MonitorRecord>& history, const RadiusState& state, double s,
                               double tolerance) {
  if (history.size() < state.t.size()) throw InvalidArgument("history is shorter than the radius trajectory");
  XNormReport rep;
  for (std::size_t i = 0; i < state.t.size(); ++i) {
    if (std::abs(history[i].t - state.t[i]) > 1e-12 * std::max(1.0, state.t[i])) {
      throw InvalidArgument("history and radius trajectory use different times");
    }
    GevreyParams g;
    g.s = s;
    g.tau = state.tau[i];
    g.m_max = history[i].series.max_order();
    const double x = x_norm(history[i].series, g).value;
    rep.x_norm.push_back(x);
    rep.worst_ratio = std::max(rep.worst_ratio, state.H[i] > 0.0 ? x / state.H[i] : (x > 0.0 ? INFINITY : 0.0));
  }
  rep.holds = rep.worst_ratio <= 1.0 + tolerance;
  return rep;
}

SpectrumFit fit_radius(const SpectralField& F, double s) {
  const Grid& g = F.grid();
  const double unit = g.wavenumber_unit();
  const double cutoff = dealias_cutoff(g) * unit;
  std::map<long, std::pair<double, double>> shells;  // shell -> (amplitude, |k| at the max)
  for (std::size_t i = 0; i < g.points(); ++i) {
    const auto kv = F.wavevector(i);
    const double k = std::sqrt(kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]);
    if (k == 0.0 || k > cutoff * (1.0 + 1e-12)) continue;
    double amp2 = 0.0;
    for (int c = 0; c < F.components(); ++c) amp2 += std::norm(F.component(c)[i]);
    const double amp = std::sqrt(amp2);
    const long shell = static_cast<long>(std::floor(k / unit + 1e-9));
    auto [it, inserted] = shells.try_emplace(shell, amp, k);
    if (!inserted && amp > it->second.first) it->second = {amp, k};
  }
  std::vector<double> ks, amps;
  for (const auto& [shell, entry] : shells) {
    ks.push_back(entry.second);
    amps.push_back(entry.first);
  }
  return fit_radius(ks, amps, s);
}

SpectrumFit fit_radius(const std::vector<double>& k, const std::vector<double>& amplitude, double s) {
  if (!(s >= 1.0)) throw InvalidArgument("Gevrey index s must be >= 1");
  if (k.size() != amplitude.size()) throw InvalidArgument("wavenumbers and amplitudes differ in length");
  SpectrumFit fit;
  fit.s = s;
  double peak = 0.0;
  for (double a : amplitude) peak = std::max(peak, a);
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] > 0.0 && amplitude[i] > 1e-13 * peak) {
      fit.k.push_back(k[i]);
      fit.amplitude.push_back(amplitude[i]);
    }
  }
  if (fit.k.size() < 6) throw InvalidArgument("spectrum fit needs at least 6 shells above the noise floor");

  const auto rows = static_cast<Eigen::Index>(fit.k.size());
  Eigen::MatrixXd A(rows, 3);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double k_i = fit.k[static_cast<std::size_t>(i)];
    A(i, 0) = 1.0;
    A(i, 1) = -std::log(k_i);
    A(i, 2) = -std::pow(k_i, 1.0 / s);
    y(i) = std::log(fit.amplitude[static_cast<std::size_t>(i)]);
  }
  const Eigen::VectorXd p = A.colPivHouseholderQr().solve(y);
  fit.log_A = p(0);
  fit.sigma = p(1);
  fit.tau_fit = p(2);
  fit.rms_residual = std::sqrt((A * p - y).squaredNorm() / static_cast<double>(rows));

  const auto [lo, hi] = std::minmax_element(fit.k.begin(), fit.k.end());
  const double drop = fit.sigma * std::log(*hi / *lo) + fit.tau_fit * (std::pow(*hi, 1.0 / s) - std::pow(*lo, 1.0 / s));
  fit.non_decaying = fit.tau_fit <= 0.0 || drop < std::max(1.0, 3.0 * fit.rms_residual);
  return fit;
}

void write_radius_csv(std::ostream& out, const RadiusState& state, const std::vector<double>& lower_bound,
                      const std::vector<double>& tau_fit) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  write_csv_row(out, {"t", "tau", "tau_lower_bound", "tau_fit", "H", "residual"});
  for (std::size_t i = 0; i < state.t.size(); ++i) {
    write_csv_row(out, {csv_number(state.t[i]), csv_number(state.tau[i]),
                        csv_number(i < lower_bound.size() ? lower_bound[i] : nan),
                        csv_number(i < tau_fit.size() ? tau_fit[i] : nan), csv_number(state.H[i]),
                        csv_number(state.residual[i])});
  }
}

}  // namespace gevrey

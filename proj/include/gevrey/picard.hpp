#pragma once

#include <iosfwd>
#include <vector>

#include "gevrey/field.hpp"
#include "gevrey/norms.hpp"

namespace gevrey {

/// Transport part -(w . grad) v, dealiased.
SpectralField transport_term(const SpectralField& v, const SpectralField& w);

/// -(w . grad) v - grad Pi(w, w). Linear in v for fixed w; no projection, so
/// iterates need not stay divergence-free.
SpectralField modified_rhs(const SpectralField& v, const SpectralField& w);
Field modified_rhs(const Field& v, const Field& w);

struct PicardConfig {
  double T = 0.1;
  int n_iters = 8;
  /// RK4 steps over [0, T]; must be a multiple of `samples`.
  int steps = 64;
  /// sup_t is taken over samples + 1 equispaced times including t = 0.
  int samples = 16;
  int r = 5;
  WeightParams weight{};
  /// Constant of the uniform bound ||u0|| / (1 - 2 C t ||u0||). Zero skips the
  /// bound check.
  double C = 0.0;
  /// Shell tolerance for u0; iterates at t > 0 use `evolved_shell_tolerance`
  /// (see SimConfig).
  NormOptions norm_options{};
  double evolved_shell_tolerance = 1e-3;

  void validate() const;
};

struct PicardIteration {
  /// Index n of the iterate u^(n+1) produced in this round.
  int n = 0;
  /// max_t ||u^(n+1)(t)||_{H^r_l}.
  double sup_norm = 0.0;
  /// Largest ratio ||u^(n+1)(t)|| / (||u0|| / (1 - 2 C t ||u0||)) over samples.
  double bound_ratio = 0.0;
  /// e_n = sup_t ||u^(n+1) - u^(n)||_{H^{r-1}_l}.
  double e = 0.0;
  /// Residual of the contraction fit at this n (NaN when excluded).
  double fit_residual = 0.0;
};

/// log e_n = a + b (n+1) - c log((n+1)!) by least squares.
struct ContractionFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double rms_residual = 0.0;
  std::vector<int> used;
};

/// Fits the points with e_n > floor. Needs at least 4 such points.
ContractionFit fit_contraction(const std::vector<double>& e, double floor = 0.0);

struct PicardState {
  std::vector<double> sample_times;
  double u0_norm = 0.0;  // ||u0||_{H^r_l}
  std::vector<PicardIteration> iterations;
  ContractionFit fit;
  bool fit_valid = false;
  /// Last iterate at t = T.
  SpectralField final_state;
};

/// u^(0)(t) = u0; u^(n+1) solves d_t v + u^(n) . grad v + grad Pi(u^(n), u^(n)) = 0,
/// v(0) = u0, by RK4 with u^(n) at stage midpoints from cubic interpolation of
/// its stored step values. Throws InvalidArgument when 1 - 2 C T ||u0|| <= 0.
PicardState run_picard(const Field& u0, const PicardConfig& cfg);

/// Columns: n, sup_bound_value, e_n, fit_residual.
void write_picard_csv(std::ostream& out, const PicardState& state);

}  // namespace gevrey

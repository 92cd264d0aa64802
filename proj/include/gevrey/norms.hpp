#pragma once

#include <vector>

#include "gevrey/derivative_bank.hpp"
#include "gevrey/field.hpp"

namespace gevrey {

struct NormOptions {
  int derivative_cap = kDefaultDerivativeCap;
  /// Weighted (l > 0) evaluations reject fields whose boundary-shell mass
  /// fraction exceeds this value.
  double shell_tolerance = kDefaultShellTolerance;
};

/// (h^dim sum <x>^{2l} |f|^2)^{1/2}; |f| is the Euclidean norm over components.
double weighted_L2(const Field& f, const WeightParams& w, const NormOptions& opts = {});
/// max over samples of <x>^l |f|.
double weighted_sup(const Field& f, const WeightParams& w, const NormOptions& opts = {});
/// Unweighted L^2 norm of d^alpha f computed from the coefficients by Parseval.
double spectral_L2(const SpectralField& coefficients, const MultiIndex& alpha);

/// |f|_{m,l} = sum_{|alpha|=m} ||<x>^l d^alpha f||_{L^2}.
double seminorm_m(const Field& f, int m, const WeightParams& w, const NormOptions& opts = {});
double seminorm_m(DerivativeBank& bank, int m, const WeightParams& w, const NormOptions& opts = {});
/// |f|_{m,l,inf} = sum_{|alpha|=m} ||<x>^l d^alpha f||_{L^inf}.
double seminorm_m_inf(const Field& f, int m, const WeightParams& w, const NormOptions& opts = {});
double seminorm_m_inf(DerivativeBank& bank, int m, const WeightParams& w, const NormOptions& opts = {});

/// ||f||_{H^r_l}^2 = ||f||_{L^2}^2 + sum_{1<=|alpha|<=r} ||<x>^l d^alpha f||^2.
/// With l = 0 this is the standard H^r norm.
double sobolev_norm(const Field& f, int r, const WeightParams& w, const NormOptions& opts = {});
double sobolev_norm(DerivativeBank& bank, int r, const WeightParams& w, const NormOptions& opts = {});

struct GevreyParams {
  double s = 1.0;
  double tau = 1.0;
  int m_max = 8;

  static constexpr int kMinOrder = 3;
  /// Throws InvalidArgument unless s >= 1, tau > 0, 4 <= m_max <= cap.
  void validate(int derivative_cap = kDefaultDerivativeCap) const;
};

/// Seminorms |u|_{m,l} for m = 0..m_max of one field.
struct GevreySeries {
  std::vector<double> entries;
  WeightParams weight;

  int max_order() const { return static_cast<int>(entries.size()) - 1; }
};

GevreySeries gevrey_series(const Field& f, int m_max, const WeightParams& w, const NormOptions& opts = {});
GevreySeries gevrey_series(DerivativeBank& bank, int m_max, const WeightParams& w, const NormOptions& opts = {});

/// Truncated series value together with the magnitude of its last term.
struct SeriesValue {
  double value = 0.0;
  double last_term = 0.0;
};

/// sum_{m=3}^{m_max} |v|_{m,l} tau^{m-3} / (m-3)!^s.
SeriesValue x_norm(const GevreySeries& series, const GevreyParams& g);
/// sum_{m=4}^{m_max} |v|_{m,l} (m-3) tau^{m-4} / (m-3)!^s, the tau-derivative of x_norm.
SeriesValue y_norm(const GevreySeries& series, const GevreyParams& g);

/// log(n!); exact table below 21, lgamma above.
double log_factorial(int n);
/// tau^p / q!^s evaluated in log space.
double gevrey_weight(double tau, int power, int factorial_arg, double s);

}  // namespace gevrey

#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gevrey/field.hpp"
#include "gevrey/norms.hpp"

namespace gevrey {

// ---- combinatorics ----

struct SidePair {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Values x_lambda indexed by 3D multi-indices.
using IndexedReals = std::map<MultiIndex, double>;

/// sum_{|alpha|=m} sum_{|beta|=j, beta<=alpha} x_beta y_{alpha-beta} against
/// (sum_{|beta|=j} x_beta)(sum_{|gamma|=m-j} y_gamma), each by its own
/// enumeration. Needs 0 <= j <= m <= 12; throws when an index is missing.
SidePair check_convolution_identity(int m, int j, const IndexedReals& x, const IndexedReals& y);

/// (alpha choose beta) and (|alpha| choose |beta|). Throws unless beta <= alpha.
SidePair check_binomial_domination(const MultiIndex& alpha, const MultiIndex& beta);

struct DominationSweep {
  long cases = 0;
  long violations = 0;
  double worst_ratio = 0.0;  // max lhs / rhs
};

/// Every beta <= alpha with |alpha| <= max_order in 3D.
DominationSweep sweep_binomial_domination(int max_order);

/// A_{m,j,s} for 3 <= j <= m/2 (so m >= 6), from its factorial definition in
/// log space.
double eval_A(int m, int j, double s);
/// The same quantity through C(m-3, j-1)^{1-s} times a rational factor.
double eval_A_factored(int m, int j, double s);
/// A'_{m,j,s} for floor(m/2) + 1 <= j <= m - 3 (so m >= 7).
double eval_A_prime(int m, int j, double s);
double eval_A_prime_factored(int m, int j, double s);

struct ASweep {
  double s = 1.0;
  int m_max = 0;
  long cases = 0;
  /// Largest relative gap between the two evaluations of A and A'.
  double max_factorization_gap = 0.0;
  double sup_A = 0.0;
  int sup_A_m = 0, sup_A_j = 0;
  double sup_A_prime = 0.0;
  int sup_A_prime_m = 0, sup_A_prime_j = 0;
  /// sup of A * j (j-1)^{s/4} (j-2)^{s/4}: A over its majorant.
  double sup_A_over_majorant = 0.0;
  /// sup over m >= 5 of C(m,2) / ((m-4)(m-3)^s).
  double sup_binomial_ratio = 0.0;
};

ASweep sweep_A(int m_max, double s);

// ---- inequality probes ----

/// One measured instance of a "lhs <= C rhs" statement. ratio = lhs / rhs,
/// with 0/0 taken as 0.
struct ProbeReport {
  std::string name;
  std::string input;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::string resolution;
};

ProbeReport make_report(std::string name, std::string input, double lhs, double rhs, const Grid& grid);
double max_ratio(const std::vector<ProbeReport>& reports);

/// ||<x>^l d^beta u . grad d^{alpha-beta} u||_{L^2} against ||u||_{H^r} ||u||_{H^r_l}.
/// Needs 0 != beta <= alpha and |alpha| <= r.
ProbeReport probe_product_estimate(DerivativeBank& u, const MultiIndex& alpha, const MultiIndex& beta, int r,
                            const WeightParams& w, const NormOptions& opts = {});
/// All (alpha, beta) with 1 <= |alpha| <= r.
std::vector<ProbeReport> sweep_product_estimate(const Field& u, int r, const WeightParams& w, const NormOptions& opts = {});

/// ||<x>^l grad d^alpha p||_{L^2} against ||u||_{H^r} ||u||_{H^r_l}, for all
/// 1 <= |alpha| <= r, with -Lap p = sum d_i u_j d_j u_i.
std::vector<ProbeReport> sweep_pressure_estimate(const Field& u, int r, const WeightParams& w, const NormOptions& opts = {});

/// ||<x>^l grad u||_{L^inf} against ||u||_{H^3_l}.
ProbeReport probe_gradient_embedding(const Field& u, const WeightParams& w, const NormOptions& opts = {});

/// ||u||_{L^4} against ||u||_{L^2}^{1 - d/4} ||Du||_{L^2}^{d/4} (d = 2 or 3).
ProbeReport probe_gn(const Field& u);

/// Weighted Calderon-Zygmund ratio ||<x>^l D^2 f|| / ||<x>^l Lap f|| for each
/// component f of u, reported as lhs / rhs.
std::vector<ProbeReport> sweep_cz(const Field& u, const WeightParams& w, const NormOptions& opts = {});

struct CancellationReport {
  /// |<<x>^l u.grad d^alpha u, <x>^l d^alpha u>| against ||u||_{L^inf} ||u||_{H^r_l}^2.
  ProbeReport bound;
  /// |<u . grad w, w>| with w = <x>^l d^alpha u, which vanishes for
  /// divergence-free u.
  double residual = 0.0;
  double w_norm_sq = 0.0;  // ||w||^2
};

CancellationReport probe_cancellation(const Field& u, const MultiIndex& alpha, int r, const WeightParams& w,
                                      const NormOptions& opts = {});

/// max over all 1 <= |alpha| <= r of residual / ||w||^2.
double max_cancellation_residual(const Field& u, int r, const WeightParams& w, const NormOptions& opts = {});

// ---- truncated Gevrey sums ----

/// sum_{m=3}^{m_max} tau^{m-3}/(m-3)!^s sum_{|alpha|=m} sum_{0!=beta<=alpha}
/// (alpha choose beta) ||<x>^l d^beta u . grad d^{alpha-beta} u||.
double compute_C_ell(const Field& u, const GevreyParams& g, const WeightParams& w, const NormOptions& opts = {});
/// sum_{m=3}^{m_max} tau^{m-3}/(m-3)!^s sum_{|alpha|=m} ||<x>^l grad d^alpha p||.
double compute_P_ell(const Field& u, const GevreyParams& g, const WeightParams& w, const NormOptions& opts = {});

struct GevreyBoundReport {
  double C_ell = 0.0;
  double P_ell = 0.0;
  /// The norm combinations multiplying C in the C_l and P_l estimates.
  double C_ell_bracket = 0.0;
  double P_ell_bracket = 0.0;
  double C_ell_ratio = 0.0;
  double P_ell_ratio = 0.0;
};

/// Evaluates both sums and their brackets with r = 5 Sobolev norms,
/// X = ||u||_{X_tau} (unweighted) and Y = ||u||_{Y_{tau,l}}.
GevreyBoundReport gevrey_bounds(const Field& u, const GevreyParams& g, const WeightParams& w, int r = 5,
                                const NormOptions& opts = {});

// ---- family runs ----

struct LabConstants {
  double product = 0.0;
  double pressure = 0.0;
  /// 2 * max(product, pressure): the constant used by the Picard bound and
  /// the radius tracker.
  double calibrated_C = 0.0;
};

LabConstants calibrate_constants(const std::vector<Field>& family, int r, const WeightParams& w,
                                 const NormOptions& opts = {});

/// Columns: name, input, lhs, rhs, ratio, resolution.
void write_probe_csv(std::ostream& out, const std::vector<ProbeReport>& reports);

}  // namespace gevrey

#pragma once

#include <vector>

#include "gevrey/field.hpp"
#include "gevrey/norms.hpp"

namespace gevrey {

/// Physical-space velocity gradient of a vector field given by its
/// coefficients: entry [i * dim + j] holds d_j u_i.
std::vector<Field> velocity_gradient(const SpectralField& u);

/// Dealiased coefficients of (w . grad) v. Inputs are truncated to the 2/3
/// band before the product is formed.
SpectralField advection(const Field& w, const Field& v);
SpectralField advection(const SpectralField& w, const SpectralField& v);

/// Dealiased coefficients of sum_{i,j} d_i u_j d_j v_i.
SpectralField pressure_source(const SpectralField& u, const SpectralField& v);

/// Solves -Lap p = source with the k = 0 coefficient set to zero.
SpectralField inverse_laplacian(const SpectralField& source);

struct PressureResult {
  Field p;
  Field grad_p;
  /// Relative L^2 mismatch between -Lap p and the zero-mean part of the source.
  double residual = 0.0;
};

/// p with -Lap p = sum d_i u_j d_j u_i, zero mean.
PressureResult solve_pressure(const Field& u);
/// Pi(u, v) with -Lap Pi = sum d_i u_j d_j v_i.
PressureResult bilinear_pressure(const Field& u, const Field& v);
/// Coefficients of grad Pi(u, v).
SpectralField bilinear_pressure_gradient(const SpectralField& u, const SpectralField& v);

/// u(k) <- u(k) - k (k . u(k)) / |k|^2 for k != 0.
SpectralField leray_project(const SpectralField& u);
Field leray_project(const Field& u);

/// max_k |k . u(k)|, with the same Nyquist convention as derivative().
double divergence_max(const SpectralField& u);
double divergence_max(const Field& u);

/// ||<x>^l D^2 f|| / ||<x>^l Lap f|| for a scalar f, where the Hessian norm is
/// the root of the sum over all d_i d_j of the squared weighted norms.
double cz_ratio(const Field& f, const WeightParams& w, const NormOptions& opts = {});

}  // namespace gevrey

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "gevrey/field.hpp"

namespace test_support {

inline double max_abs_diff(const gevrey::Field& a, const gevrey::Field& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  return worst;
}

inline double max_abs(const gevrey::Field& a) {
  double worst = 0.0;
  for (double v : a.values()) worst = std::max(worst, std::abs(v));
  return worst;
}

/// Plain quadrature h^d sum |f|^2, square-rooted; deliberately independent of
/// the norms module.
inline double plain_l2(const gevrey::Field& f) {
  long double acc = 0.0L;
  for (double v : f.values()) acc += static_cast<long double>(v) * v;
  return std::sqrt(static_cast<double>(acc) * f.grid().cell_volume());
}

inline double rel_err(double value, double expected) {
  return std::abs(value - expected) / std::max(std::abs(expected), 1e-300);
}

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2 == 1) ++panels;
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

/// Whole-space integral of a radial function in 3D: int_0^R g(r) 4 pi r^2 dr.
inline double radial_integral_3d(const std::function<double(double)>& g, double radius) {
  return simpson([&](double r) { return g(r) * 4.0 * std::numbers::pi * r * r; }, 0.0, radius, 400000);
}

}  // namespace test_support

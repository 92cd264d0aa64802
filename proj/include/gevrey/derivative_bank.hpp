#pragma once

#include <map>
#include <memory>
#include <span>

#include "gevrey/field.hpp"

namespace gevrey {

/// Memoized physical-space derivatives d^alpha u of one field. Sweeps over
/// many (alpha, beta) pairs reuse each derivative instead of transforming
/// again. Not thread-safe for get(); prefetch() fills the cache in parallel.
class DerivativeBank {
 public:
  explicit DerivativeBank(const Field& u, int cap = kDefaultDerivativeCap);
  explicit DerivativeBank(SpectralField coefficients, int cap = kDefaultDerivativeCap);

  const Grid& grid() const { return spectrum_.grid(); }
  int components() const { return spectrum_.components(); }
  int cap() const { return cap_; }
  const SpectralField& spectrum() const { return spectrum_; }

  const Field& get(const MultiIndex& alpha);
  void prefetch(std::span<const MultiIndex> alphas);
  /// Drops cached derivatives of order above `max_order`.
  void trim(int max_order);

 private:
  SpectralField spectrum_;
  int cap_;
  std::map<MultiIndex, std::unique_ptr<Field>> cache_;
};

}  // namespace gevrey

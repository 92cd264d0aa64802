#include "gevrey/derivative_bank.hpp"

#include <vector>

#include "gevrey/parallel.hpp"

namespace gevrey {

DerivativeBank::DerivativeBank(const Field& u, int cap) : DerivativeBank(spectral_transform(u), cap) {}

DerivativeBank::DerivativeBank(SpectralField coefficients, int cap) : spectrum_(std::move(coefficients)), cap_(cap) {}

const Field& DerivativeBank::get(const MultiIndex& alpha) {
  auto it = cache_.find(alpha);
  if (it == cache_.end()) {
    auto field = std::make_unique<Field>(inverse_transform(derivative(spectrum_, alpha, cap_)));
    it = cache_.emplace(alpha, std::move(field)).first;
  }
  return *it->second;
}

void DerivativeBank::prefetch(std::span<const MultiIndex> alphas) {
  std::vector<MultiIndex> missing;
  for (const auto& alpha : alphas) {
    if (!cache_.contains(alpha)) missing.push_back(alpha);
  }
  std::vector<std::unique_ptr<Field>> computed(missing.size());
  parallel_for(missing.size(), [&](std::size_t i) {
    computed[i] = std::make_unique<Field>(inverse_transform(derivative(spectrum_, missing[i], cap_)));
  });
  for (std::size_t i = 0; i < missing.size(); ++i) cache_.emplace(missing[i], std::move(computed[i]));
}

void DerivativeBank::trim(int max_order) {
  std::erase_if(cache_, [&](const auto& entry) { return entry.first.order() > max_order; });
}

}  // namespace gevrey

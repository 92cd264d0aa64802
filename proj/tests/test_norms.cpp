#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gevrey/error.hpp"
#include "gevrey/initial_conditions.hpp"
#include "gevrey/norms.hpp"
#include "support.hpp"

using namespace gevrey;
using test_support::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;

Field sine_x1(const Grid& g) {
  return Field::sample(g, 1, [](const std::array<double, 3>& x, int) { return std::sin(x[0]); });
}

// Coefficient-space oracle for sum_{|alpha|=m} ||d^alpha f||: multiplies each
// coefficient by prod |k_d|^alpha_d by hand.
double oracle_seminorm(const Field& f, int m) {
  const Grid& g = f.grid();
  const SpectralField F = spectral_transform(f);
  double total = 0.0;
  for (const auto& alpha : MultiIndex::enumerate(g.dim(), m)) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < g.points(); ++i) {
      const auto slots = g.unflatten(i);
      long double factor = 1.0L;
      for (int d = 0; d < g.dim(); ++d) {
        const int idx = g.mode_index(slots[static_cast<std::size_t>(d)]);
        if (idx == -g.n() / 2 && alpha[d] % 2 == 1) factor = 0.0L;
        factor *= std::pow(static_cast<long double>(idx * kPi / g.half_length()), 2 * alpha[d]);
      }
      for (int c = 0; c < f.components(); ++c) acc += factor * std::norm(F.component(c)[i]);
    }
    total += std::sqrt(static_cast<double>(acc) * g.box_volume());
  }
  return total;
}

GevreySeries synthetic(std::vector<double> entries) { return GevreySeries{std::move(entries), WeightParams{}}; }

}  // namespace

TEST_CASE("weighted_L2 examples") {
  const Grid g(3, 32, kPi);
  CHECK(weighted_L2(Field(g, 3), WeightParams{0.0}) == 0.0);
  CHECK(weighted_L2(sine_x1(g), WeightParams{0.0}) == doctest::Approx(std::sqrt(4 * kPi * kPi * kPi)).epsilon(1e-12));
  CHECK(std::sqrt(4 * kPi * kPi * kPi) == doctest::Approx(11.1366).epsilon(1e-5));
  CHECK_THROWS_AS(weighted_L2(sine_x1(g), WeightParams{1.0}), BoundaryShellViolation);
}

TEST_CASE("Gaussian weighted L2 with l = 1 against a radial oracle") {
  const Grid g(3, 64, 2 * kPi);
  const Field gauss = Field::sample(g, 1, [](const std::array<double, 3>& x, int) {
    return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  });
  const double oracle = std::sqrt(
      test_support::radial_integral_3d([](double r) { return (1.0 + r * r) * std::exp(-2.0 * r * r); }, 12.0));
  CHECK(rel_err(weighted_L2(gauss, WeightParams{1.0}), oracle) < 1e-6);
}

TEST_CASE("seminorm examples") {
  const Grid g(3, 32, kPi);
  const Field s = sine_x1(g);
  CHECK(seminorm_m(s, 0, WeightParams{}) == doctest::Approx(weighted_L2(s, WeightParams{})).epsilon(1e-13));
  CHECK(seminorm_m(s, 1, WeightParams{}) == doctest::Approx(std::sqrt(4 * kPi * kPi * kPi)).epsilon(1e-12));
  CHECK(seminorm_m_inf(s, 1, WeightParams{}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(seminorm_m(s, 11, WeightParams{}), InvalidArgument);

  const Field band = random_band_limited(Grid(3, 16, 2.0), 3, 5, 42);
  for (int m = 0; m <= 6; ++m) CHECK(rel_err(seminorm_m(band, m, WeightParams{}), oracle_seminorm(band, m)) < 1e-10);
}

TEST_CASE("l = 0 weighted norms agree with the physical-space evaluation") {
  const Grid g(3, 32, 2 * kPi);
  const Field u = decaying_vortex(g, 1);
  for (int m = 1; m <= 4; ++m) {
    double physical = 0.0;
    for (const auto& alpha : MultiIndex::enumerate(3, m)) physical += test_support::plain_l2(derivative(u, alpha));
    CHECK(rel_err(seminorm_m(u, m, WeightParams{}), physical) < 1e-12);
  }
}

TEST_CASE("single-mode H^2 closed form") {
  // cos(x1 + 2 x2): sum over |alpha| <= 2 of k^{2 alpha} is 1 + (1 + 4) + (1 + 16 + 4) = 27.
  const Grid g(3, 16, kPi);
  const Field c = Field::sample(g, 1, [](const std::array<double, 3>& x, int) { return std::cos(x[0] + 2 * x[1]); });
  const double expected = std::sqrt(4 * kPi * kPi * kPi * 27.0);
  CHECK(rel_err(sobolev_norm(c, 2, WeightParams{}), expected) < 1e-12);
  CHECK(sobolev_norm(Field(g, 3), 2, WeightParams{}) == 0.0);
}

TEST_CASE("weighted Sobolev norms dominate and increase with l") {
  const Grid g(3, 32, 2 * kPi);
  for (int index = 0; index < 3; ++index) {
    const Field u = decaying_vortex(g, index);
    DerivativeBank bank(u);
    const double plain = sobolev_norm(bank, 5, WeightParams{0.0});
    double previous = plain;
    for (double ell : {0.25, 0.5, 1.0, 1.4}) {
      const double weighted = sobolev_norm(bank, 5, WeightParams{ell});
      CHECK(plain <= weighted);
      CHECK(previous <= weighted);
      previous = weighted;
    }
  }
}

TEST_CASE("band-limited fields obey the Bernstein-type bound") {
  const Grid g(3, 16, kPi);
  const int max_mode = 3;
  const Field u = random_band_limited(g, 1, max_mode, 9);
  const double K = std::sqrt(3.0) * max_mode;  // |k| <= sqrt(3)*max_mode when pi/L = 1
  const double l2 = weighted_L2(u, WeightParams{});
  for (int m = 0; m <= 8; ++m) {
    const double count = static_cast<double>(MultiIndex::enumerate(3, m).size());
    CHECK(seminorm_m(u, m, WeightParams{}) <= count * std::pow(K, m) * l2);
  }
}

TEST_CASE("x_norm examples") {
  const GevreyParams one{1.0, 1.0, 8};
  CHECK(x_norm(synthetic(std::vector<double>(9, 0.0)), one).value == 0.0);

  std::vector<double> only3(9, 0.0);
  only3[3] = 1.0;
  for (double tau : {0.1, 1.0, 7.0}) CHECK(x_norm(synthetic(only3), GevreyParams{1.5, tau, 8}).value == doctest::Approx(1.0));

  for (double s : {1.0, 2.0}) {
    for (int m_max : {4, 8, 10}) {
      std::vector<double> e(static_cast<std::size_t>(m_max) + 1, 0.0);
      for (int m = 3; m <= m_max; ++m) e[static_cast<std::size_t>(m)] = std::pow(std::tgamma(m - 2.0), s) / std::pow(2.0, m - 3);
      const auto x = x_norm(synthetic(e), GevreyParams{s, 1.0, m_max});
      const double expected = 2.0 - std::pow(2.0, -(m_max - 3));
      CHECK(rel_err(x.value, expected) < 1e-14);
      CHECK(x.last_term == doctest::Approx(std::pow(0.5, m_max - 3)));
    }
  }
}

TEST_CASE("x_norm is increasing and convex in tau") {
  const std::vector<double> e{9.0, 5.0, 3.0, 2.0, 1.5, 1.2, 0.8, 0.7, 0.3};
  std::vector<double> values;
  for (int i = 0; i <= 40; ++i) values.push_back(x_norm(synthetic(e), GevreyParams{1.0, 0.05 + 0.05 * i, 8}).value);
  for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i] >= values[i - 1]);
  for (std::size_t i = 1; i + 1 < values.size(); ++i) CHECK(values[i - 1] + values[i + 1] - 2 * values[i] >= -1e-14);
}

TEST_CASE("y_norm is the tau-derivative of x_norm") {
  const std::vector<double> e{9.0, 5.0, 3.0, 2.0, 1.5, 1.2, 0.8, 0.7, 0.3, 0.2, 0.1};
  for (double s : {1.0, 1.5, 2.0}) {
    for (double tau : {0.2, 0.9, 2.5}) {
      const GevreyParams g{s, tau, 10};
      const double y = y_norm(synthetic(e), g).value;
      // term-by-term derivative of c_m tau^{m-3}/(m-3)!^s
      double analytic = 0.0;
      for (int m = 4; m <= 10; ++m) {
        analytic += e[static_cast<std::size_t>(m)] * (m - 3) * std::pow(tau, m - 4) / std::pow(std::tgamma(m - 2.0), s);
      }
      CHECK(rel_err(y, analytic) < 1e-12);

      const auto X = [&](double t) { return x_norm(synthetic(e), GevreyParams{s, t, 10}).value; };
      const auto central = [&](double h) { return (X(tau + h) - X(tau - h)) / (2 * h); };
      const double h = 1e-3;
      const double richardson = (4.0 * central(h / 2) - central(h)) / 3.0;
      CHECK(rel_err(y, richardson) < 1e-10);
    }
  }

  std::vector<double> only4(9, 0.0);
  only4[4] = 1.0;
  CHECK(y_norm(synthetic(only4), GevreyParams{1.0, 0.5, 8}).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(y_norm(synthetic(std::vector<double>(9, 0.0)), GevreyParams{}).value == 0.0);
}

TEST_CASE("Gevrey parameters and log-factorials") {
  CHECK_THROWS_AS(GevreyParams({0.9, 1.0, 8}).validate(), InvalidArgument);
  CHECK_THROWS_AS(GevreyParams({1.0, 0.0, 8}).validate(), InvalidArgument);
  CHECK_THROWS_AS(GevreyParams({1.0, 1.0, 3}).validate(), InvalidArgument);
  CHECK_THROWS_AS(GevreyParams({1.0, 1.0, 11}).validate(), InvalidArgument);
  CHECK(log_factorial(5) == doctest::Approx(std::log(120.0)));
  CHECK(rel_err(log_factorial(21), std::log(51090942171709440000.0)) < 1e-14);
  CHECK(std::isfinite(log_factorial(200)));
  CHECK(std::isfinite(gevrey_weight(3.0, 197, 197, 2.0)));
  CHECK_THROWS_AS(x_norm(synthetic(std::vector<double>(6, 0.0)), GevreyParams{}), InvalidArgument);
}

TEST_CASE("gevrey_series entries match individual seminorms") {
  const Grid g(3, 32, 2 * kPi);
  const Field u = decaying_vortex(g, 2);
  for (double ell : {0.0, 1.0}) {
    const auto series = gevrey_series(u, 8, WeightParams{ell});
    REQUIRE(series.max_order() == 8);
    for (int m = 0; m <= 8; ++m) {
      CHECK(series.entries[static_cast<std::size_t>(m)] >= 0.0);
      CHECK(rel_err(series.entries[static_cast<std::size_t>(m)], seminorm_m(u, m, WeightParams{ell})) < 1e-13);
    }
  }
}

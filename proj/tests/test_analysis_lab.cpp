#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gevrey/analysis_lab.hpp"
#include "gevrey/error.hpp"
#include "gevrey/initial_conditions.hpp"

using namespace gevrey;

namespace {

constexpr double kPi = std::numbers::pi;

std::array<double, 3> point(const Grid& g, std::size_t flat) {
  const auto slots = g.unflatten(flat);
  return {g.coordinate(slots[0]), g.coordinate(slots[1]), g.coordinate(slots[2])};
}

Field scalar_from(const Grid& g, const std::function<double(const std::array<double, 3>&)>& f) {
  Field out(g, 1);
  for (std::size_t i = 0; i < g.points(); ++i) out.component(0)[i] = f(point(g, i));
  return out;
}

// u = (f(y), 0, 0): every transport product and the pressure source vanish.
Field shear_flow(const Grid& g) {
  Field u(g, 3);
  for (std::size_t i = 0; i < g.points(); ++i) {
    const double y = point(g, i)[1];
    u.component(0)[i] = std::exp(-y * y);
  }
  return u;
}

Field scaled(Field u, double lambda) {
  for (int c = 0; c < u.components(); ++c) {
    for (double& v : u.component(c)) v *= lambda;
  }
  return u;
}

std::map<std::string, double> by_input(const std::vector<ProbeReport>& reports) {
  std::map<std::string, double> out;
  for (const auto& r : reports) out[r.input] = r.ratio;
  return out;
}

double worst_relative_change(const std::vector<ProbeReport>& coarse, const std::vector<ProbeReport>& fine) {
  const auto a = by_input(coarse);
  const auto b = by_input(fine);
  double worst = 0.0;
  for (const auto& [k, v] : a) {
    const double w = b.at(k);
    if (std::max(v, w) < 1e-12) continue;
    worst = std::max(worst, std::abs(v - w) / std::max(v, w));
  }
  return worst;
}

}  // namespace

TEST_CASE("identity on all-ones data counts index pairs") {
  IndexedReals ones;
  for (const auto& a : MultiIndex::enumerate_range(3, 0, 4)) ones[a] = 1.0;
  const auto p = check_convolution_identity(4, 2, ones, ones);
  CHECK(p.lhs == 36.0);
  CHECK(p.rhs == 36.0);
  const auto p0 = check_convolution_identity(4, 0, ones, ones);
  CHECK(p0.lhs == 15.0);
  CHECK(p0.rhs == 15.0);
  CHECK_THROWS_AS(check_convolution_identity(13, 2, ones, ones), InvalidArgument);
  CHECK_THROWS_AS(check_convolution_identity(5, 0, ones, ones), InvalidArgument);
}

TEST_CASE("identity holds on random data") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::uniform_int_distribution<int> order(0, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = order(rng);
    const int j = std::uniform_int_distribution<int>(0, m)(rng);
    IndexedReals x, y;
    double sx = 0.0, sy = 0.0;
    for (const auto& a : MultiIndex::enumerate_range(3, 0, m)) {
      x[a] = value(rng);
      y[a] = value(rng);
      if (a.order() == j) sx += std::abs(x[a]);
      if (a.order() == m - j) sy += std::abs(y[a]);
    }
    const auto p = check_convolution_identity(m, j, x, y);
    CHECK(std::abs(p.lhs - p.rhs) <= 1e-12 * std::max(1.0, sx * sy));
  }
}

TEST_CASE("multi-index binomial is dominated by the scalar one") {
  const auto p = check_binomial_domination(MultiIndex{2, 1, 0}, MultiIndex{1, 1, 0});
  CHECK(p.lhs == 2.0);
  CHECK(p.rhs == 3.0);
  CHECK_THROWS_AS(check_binomial_domination(MultiIndex{1, 0, 0}, MultiIndex{0, 1, 0}), InvalidArgument);
  const auto sweep = sweep_binomial_domination(8);
  long expected = 0;
  for (const auto& a : MultiIndex::enumerate_range(3, 0, 8)) expected += (a[0] + 1) * (a[1] + 1) * (a[2] + 1);
  CHECK(sweep.cases == expected);
  CHECK(sweep.violations == 0);
  CHECK(sweep.worst_ratio == 1.0);
}

TEST_CASE("A coefficients") {
  // C(6,3) 1! 2!^{3/4} 0!^{1/4} / (1 * 3!) = 10 * 2^{3/4} / 3
  CHECK(eval_A(6, 3, 1.0) == doctest::Approx(10.0 * std::pow(2.0, 0.75) / 3.0).epsilon(1e-14));
  CHECK(eval_A(6, 3, 1.0) == doctest::Approx(5.605976).epsilon(1e-6));
  CHECK(eval_A_factored(6, 3, 1.0) == doctest::Approx(eval_A(6, 3, 1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(eval_A(6, 4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(eval_A(6, 2, 1.0), InvalidArgument);
  CHECK_THROWS_AS(eval_A_prime(8, 4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(eval_A_prime(8, 6, 1.0), InvalidArgument);
  CHECK_THROWS_AS(eval_A(8, 3, 0.5), InvalidArgument);
  CHECK(eval_A_prime(8, 5, 1.0) == doctest::Approx(eval_A_prime_factored(8, 5, 1.0)).epsilon(1e-14));
}

TEST_CASE("A sweeps stay bounded") {
  struct Expect {
    double s, sup_A, sup_A_prime;
  };
  for (const Expect e : {Expect{1.0, 5.606, 5.591}, Expect{1.5, 2.968, 2.234}, Expect{2.0, 1.571, 0.893}}) {
    CAPTURE(e.s);
    const auto sw = sweep_A(200, e.s);
    MESSAGE("s=" << e.s << " sup A " << sw.sup_A << " at (" << sw.sup_A_m << "," << sw.sup_A_j << "), sup A' "
                 << sw.sup_A_prime << " at (" << sw.sup_A_prime_m << "," << sw.sup_A_prime_j << "), A/majorant "
                 << sw.sup_A_over_majorant << ", binomial ratio " << sw.sup_binomial_ratio);
    CHECK(sw.max_factorization_gap <= 1e-10);
    CHECK(sw.sup_A == doctest::Approx(e.sup_A).epsilon(1e-3));
    CHECK(sw.sup_A_prime == doctest::Approx(e.sup_A_prime).epsilon(1e-3));
    CHECK(std::isfinite(sw.sup_A_over_majorant));
    CHECK(std::isfinite(sw.sup_binomial_ratio));
    // The sup over m <= 200 is attained well inside the range.
    CHECK(sw.sup_A_over_majorant == doctest::Approx(sweep_A(100, e.s).sup_A_over_majorant));
  }
}

TEST_CASE("zero fields give zero ratios") {
  const Grid g(3, 16, 2 * kPi);
  const Field u(g, 3);
  for (const auto& r : sweep_product_estimate(u, 3, WeightParams{1.0})) CHECK(r.ratio == 0.0);
  for (const auto& r : sweep_pressure_estimate(u, 3, WeightParams{1.0})) CHECK(r.ratio == 0.0);
  CHECK(probe_gradient_embedding(u, WeightParams{1.0}).ratio == 0.0);
  CHECK(probe_gn(u).ratio == 0.0);
  CHECK(max_cancellation_residual(u, 3, WeightParams{}) == 0.0);
}

TEST_CASE("Gagliardo-Nirenberg on a single mode") {
  // u = sin x on [-pi,pi)^3: ||u||_4^4 = 3 pi^3, ||u||_2^2 = ||Du||_2^2 = 4 pi^3.
  const Grid g(3, 16, kPi);
  const auto rep = probe_gn(scalar_from(g, [](const auto& x) { return std::sin(x[0]); }));
  CHECK(rep.lhs == doctest::Approx(std::pow(3.0 * std::pow(kPi, 3), 0.25)).epsilon(1e-12));
  CHECK(rep.rhs == doctest::Approx(std::sqrt(4.0 * std::pow(kPi, 3))).epsilon(1e-12));
}

TEST_CASE("single product probe agrees with the sweep") {
  const Grid g(3, 32, 2 * kPi);
  const Field u = decaying_vortex(g, 1);
  DerivativeBank bank(u, kDefaultDerivativeCap);
  const auto one = probe_product_estimate(bank, MultiIndex{1, 1, 0}, MultiIndex{0, 1, 0}, 3, WeightParams{1.0});
  const auto all = by_input(sweep_product_estimate(u, 3, WeightParams{1.0}));
  CHECK(all.at(one.input) == doctest::Approx(one.ratio).epsilon(1e-14));
  CHECK_THROWS_AS(probe_product_estimate(bank, MultiIndex{1, 1, 0}, MultiIndex{}, 3, WeightParams{1.0}), InvalidArgument);
  CHECK_THROWS_AS(probe_product_estimate(bank, MultiIndex{2, 2, 0}, MultiIndex{1, 0, 0}, 3, WeightParams{1.0}),
                  InvalidArgument);
}

TEST_CASE("shear flow has no transport or pressure contributions") {
  const Grid g(3, 16, 2 * kPi);
  const Field u = shear_flow(g);
  GevreyParams gp;
  gp.tau = 0.5;
  gp.m_max = 6;
  CHECK(compute_C_ell(u, gp, WeightParams{}) == 0.0);
  CHECK(compute_P_ell(u, gp, WeightParams{}) <= 1e-12);
  CHECK(max_ratio(sweep_product_estimate(u, 4, WeightParams{})) == 0.0);
}

TEST_CASE("truncated sums scale quadratically and grow with tau") {
  const Grid g(3, 32, 2 * kPi);
  const Field u = decaying_vortex(g, 0);
  GevreyParams gp;
  gp.tau = 0.3;
  gp.m_max = 6;
  const WeightParams w{1.0};
  const double c = compute_C_ell(u, gp, w);
  const double p = compute_P_ell(u, gp, w);
  CHECK(c > 0.0);
  CHECK(p > 0.0);
  CHECK(compute_C_ell(scaled(u, 2.0), gp, w) == doctest::Approx(4.0 * c).epsilon(1e-10));
  CHECK(compute_P_ell(scaled(u, 2.0), gp, w) == doctest::Approx(4.0 * p).epsilon(1e-10));
  GevreyParams wider = gp;
  wider.tau = 0.6;
  CHECK(compute_C_ell(u, wider, w) > c);

  const auto rep = gevrey_bounds(u, gp, w);
  MESSAGE("C_l " << rep.C_ell << " / " << rep.C_ell_bracket << ", P_l " << rep.P_ell << " / " << rep.P_ell_bracket);
  CHECK(std::isfinite(rep.C_ell_ratio));
  CHECK(std::isfinite(rep.P_ell_ratio));
  CHECK(rep.C_ell_ratio > 0.0);
  CHECK(rep.P_ell_ratio > 0.0);
}

TEST_CASE("cancellation for divergence-free fields") {
  // n = 32 leaves residuals near 1e-7 for l = 1: w = <x> d^alpha u is not
  // resolved there.
  const Grid g(3, 64, 2 * kPi);
  const Field u = decaying_vortex(g, 0);
  for (double ell : {0.0, 1.0}) {
    const double res = max_cancellation_residual(u, 5, WeightParams{ell});
    MESSAGE("l=" << ell << " worst residual / ||w||^2 " << res);
    CHECK(res <= 1e-8);
  }
  const auto rep = probe_cancellation(u, MultiIndex{1, 0, 1}, 5, WeightParams{1.0});
  CHECK(rep.bound.ratio < 1.0);
  CHECK_THROWS_AS(probe_cancellation(random_field(g, 3, 3), MultiIndex{1, 0, 0}, 5, WeightParams{}), InvalidArgument);
}

TEST_CASE("probe ratios are stable under refinement") {
  const WeightParams w{1.0};
  const int r = 5;
  const Grid coarse(3, 32, 2 * kPi), fine(3, 64, 2 * kPi);
  const Field uc = decaying_vortex(coarse, 0), uf = decaying_vortex(fine, 0);

  const auto l33 = worst_relative_change(sweep_product_estimate(uc, r, w), sweep_product_estimate(uf, r, w));
  const auto l34 = worst_relative_change(sweep_pressure_estimate(uc, r, w), sweep_pressure_estimate(uf, r, w));
  const auto r32c = probe_gradient_embedding(uc, w).ratio, r32f = probe_gradient_embedding(uf, w).ratio;
  const auto gnc = probe_gn(uc).ratio, gnf = probe_gn(uf).ratio;
  const auto cz = worst_relative_change(sweep_cz(uc, w), sweep_cz(uf, w));
  MESSAGE("product " << l33 << ", pressure " << l34 << ", embedding " << r32c << "->" << r32f << ", GN " << gnc << "->" << gnf << ", CZ " << cz);
  CHECK(l33 <= 0.1);
  CHECK(l34 <= 0.1);
  CHECK(std::abs(r32c - r32f) <= 0.1 * std::max(r32c, r32f));
  CHECK(std::abs(gnc - gnf) <= 0.1 * std::max(gnc, gnf));
  CHECK(cz <= 0.1);
}

TEST_CASE("calibrated constants") {
  const Grid g(3, 32, 2 * kPi);
  std::vector<Field> family;
  for (int i = 0; i < 3; ++i) family.push_back(decaying_vortex(g, i));
  const auto c = calibrate_constants(family, 5, WeightParams{1.0});
  MESSAGE("product " << c.product << ", pressure " << c.pressure << ", C " << c.calibrated_C);
  CHECK(c.product > 0.0);
  CHECK(c.pressure > 0.0);
  CHECK(c.calibrated_C == 2.0 * std::max(c.product, c.pressure));
  CHECK_THROWS_AS(calibrate_constants({}, 5, WeightParams{1.0}), InvalidArgument);
}

TEST_CASE("probe CSV layout") {
  const Grid g(3, 32, 2 * kPi);
  std::ostringstream out;
  write_probe_csv(out, sweep_pressure_estimate(decaying_vortex(g, 0), 2, WeightParams{1.0}));
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "name,input,lhs,rhs,ratio,resolution");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 9);
}

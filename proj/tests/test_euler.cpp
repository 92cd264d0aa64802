#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "gevrey/error.hpp"
#include "gevrey/euler_dynamics.hpp"
#include "gevrey/initial_conditions.hpp"
#include "gevrey/pressure.hpp"
#include "support.hpp"

using namespace gevrey;
using test_support::plain_l2;

namespace {

constexpr double kPi = std::numbers::pi;

SimConfig periodic_config(const Grid& g, double t_end) {
  SimConfig cfg;
  cfg.grid = g;
  cfg.dt = 0.02;
  cfg.t_end = t_end;
  cfg.monitor_every = 10;
  return cfg;
}

Field integrate(Field u, double t_end, int steps) {
  SpectralField U = spectral_transform(u);
  for (int i = 0; i < steps; ++i) U = euler_step(U, t_end / steps);
  return inverse_transform(U);
}

}  // namespace

TEST_CASE("rhs vanishes on steady states and on zero") {
  const Grid g2(2, 64, kPi);
  const Field tg = taylor_green_2d(g2);
  CHECK(plain_l2(euler_rhs(tg)) / plain_l2(tg) < 1e-10);

  const Grid g3(3, 32, kPi);
  const Field abc = abc_flow(g3);
  CHECK(test_support::max_abs(euler_rhs(abc)) < 1e-10);
  CHECK(test_support::max_abs(euler_rhs(Field(g3, 3))) == 0.0);
}

TEST_CASE("rhs is divergence-free for generic data") {
  const Grid g(3, 32, 2 * kPi);
  const Field u = decaying_vortex(g, 0);
  CHECK(divergence_max(spectral_transform(u)) < 1e-12);
  CHECK(divergence_max(euler_rhs(spectral_transform(u))) < 1e-12);
}

TEST_CASE("steady states are preserved over unit time") {
  const Grid g2(2, 64, kPi);
  const Field tg = taylor_green_2d(g2);
  const auto run2 = simulate(tg, periodic_config(g2, 1.0));
  REQUIRE(run2.completed());
  CHECK(plain_l2(inverse_transform(run2.final_state) - tg) / plain_l2(tg) < 1e-8);

  const Grid g3(3, 32, kPi);
  const Field abc = abc_flow(g3);
  const auto run3 = simulate(abc, periodic_config(g3, 1.0));
  REQUIRE(run3.completed());
  CHECK(plain_l2(inverse_transform(run3.final_state) - abc) / plain_l2(abc) < 1e-8);

  const auto energy = verify_energy_inequality(run3.history);
  CHECK(energy.bounded);
  CHECK(energy.max_constant < 1e-8);
}

TEST_CASE("energy is conserved and monitors are consistent on decaying data") {
  const Grid g(3, 32, 2 * kPi);
  SimConfig cfg = periodic_config(g, 1.0);
  cfg.weight = WeightParams{1.0};
  cfg.dt = 0.05;
  cfg.monitor_every = 2;
  const Field u0 = decaying_vortex(g, 0);
  const auto run = simulate(u0, cfg);
  REQUIRE(run.completed());
  REQUIRE(run.history.size() >= 3);
  const double e0 = run.history.front().energy;
  double bkm_prev = 0.0;
  for (const auto& rec : run.history) {
    CHECK(std::abs(rec.energy - e0) / e0 < 1e-6);
    CHECK(rec.div_max < 1e-10);
    CHECK(rec.h_r <= rec.h_r_l);
    CHECK(rec.bkm >= bkm_prev);
    CHECK(std::isfinite(rec.bkm));
    CHECK(rec.shell_fraction < cfg.evolved_shell_tolerance);
    bkm_prev = rec.bkm;
  }
  CHECK(run.history.front().shell_fraction < kDefaultShellTolerance);
  CHECK(run.history.back().t == doctest::Approx(1.0));

  const auto energy = verify_energy_inequality(run.history);
  CHECK(energy.bounded);
  const auto gronwall = gronwall_check(run.history, energy);
  MESSAGE("implied constant " << energy.max_constant << ", Gronwall worst ratio " << gronwall.worst_ratio);
  CHECK(gronwall.holds);
}

TEST_CASE("RK4 converges at fourth order") {
  const Grid g(2, 64, kPi);
  const Field u0 = leray_project(named_initial_condition("taylor-green-perturbed", g, 3));
  const double T = 0.96;
  const Field a = integrate(u0, T, 12), b = integrate(u0, T, 24), c = integrate(u0, T, 48);
  const double order = std::log2(plain_l2(a - b) / plain_l2(b - c));
  MESSAGE("observed order " << order);
  CHECK(order >= 3.7);
  CHECK(order <= 4.3);
}

TEST_CASE("implied energy constant is stable under dt halving") {
  const Grid g(2, 64, kPi);
  const Field u0 = named_initial_condition("taylor-green-perturbed", g, 3);
  SimConfig cfg = periodic_config(g, 1.0);
  cfg.dt = 0.02;
  cfg.monitor_every = 5;
  const auto coarse = verify_energy_inequality(simulate(u0, cfg).history);
  cfg.dt = 0.01;
  cfg.monitor_every = 10;
  const auto fine = verify_energy_inequality(simulate(u0, cfg).history);
  MESSAGE("implied constants " << coarse.max_constant << " / " << fine.max_constant);
  CHECK(fine.max_constant > 0.0);
  CHECK(std::abs(coarse.max_constant - fine.max_constant) <= 0.2 * fine.max_constant);
}

TEST_CASE("periodic data fails the shell check when weighted") {
  const Grid g(3, 16, kPi);
  SimConfig cfg = periodic_config(g, 0.1);
  cfg.weight = WeightParams{1.0};
  const auto run = simulate(abc_flow(g), cfg);
  CHECK_FALSE(run.completed());
  CHECK(run.steps == 0);
}

TEST_CASE("configuration and history errors") {
  const Grid g(2, 16, kPi);
  SimConfig cfg = periodic_config(g, 1.0);
  cfg.cfl_safety = 1.5;
  CHECK_THROWS_AS(simulate(taylor_green_2d(g), cfg), InvalidArgument);
  CHECK_THROWS_AS(verify_energy_inequality({MonitorRecord{}, MonitorRecord{}}), InvalidArgument);
  Field bad = taylor_green_2d(g);
  bad.values()[0] = std::nan("");
  CHECK_THROWS_AS(simulate(bad, periodic_config(g, 1.0)), NumericalError);
}

TEST_CASE("monitor CSV layout") {
  const Grid g(2, 16, kPi);
  SimConfig cfg = periodic_config(g, 0.1);
  cfg.m_max = 5;
  const auto run = simulate(taylor_green_2d(g), cfg);
  std::ostringstream out;
  write_monitor_csv(out, run.history, cfg.m_max);
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,energy,h_r,h_r_l,bkm,div_max,shell_frac,u_3,u_4,u_5");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == run.history.size());
}

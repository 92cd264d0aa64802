#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "gevrey/analysis_lab.hpp"
#include "gevrey/cli.hpp"
#include "gevrey/csv.hpp"
#include "gevrey/euler_dynamics.hpp"
#include "gevrey/initial_conditions.hpp"
#include "gevrey/picard.hpp"
#include "gevrey/pressure.hpp"
#include "gevrey/radius_tracker.hpp"

#ifndef GEVREY_EULER_VERSION
#define GEVREY_EULER_VERSION "0.0.0"
#endif

namespace gevrey::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

std::string hex64(std::uint64_t h) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

// JSON has no NaN/Inf; they become null.
ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

/// State shared by one subcommand invocation: resolved settings, the output
/// directory and the accumulated checks.
class Session {
 public:
  Session(std::string command, Settings settings)
      : command_(std::move(command)), settings_(std::move(settings)), out_(settings_.text("run.out")) {
    summary_["subcommand"] = command_;
    summary_["version"] = GEVREY_EULER_VERSION;
    summary_["config_hash"] = hex64(settings_.hash());
  }

  const Settings& settings() const { return settings_; }
  ordered_json& summary() { return summary_; }

  void prepare_output() {
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec) throw ConfigError("cannot create output directory " + out_.string() + ": " + ec.message());
  }

  /// Opens `name` in the output directory and writes the provenance line.
  std::ofstream csv(const std::string& name) {
    std::ofstream f(out_ / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (out_ / name).string());
    f << "# gevrey-euler " << GEVREY_EULER_VERSION << " config_hash=" << hex64(settings_.hash())
      << " subcommand=" << command_ << '\n';
    return f;
  }

  void check(const std::string& name, bool pass, double value, const std::string& criterion) {
    print(pass ? "PASS" : "FAIL", name, value, criterion);
    failed_ = failed_ || !pass;
    checks_.push_back({{"name", name}, {"status", pass ? "PASS" : "FAIL"}, {"value", number(value)},
                       {"criterion", criterion}});
  }

  void report(const std::string& name, double value, const std::string& note = "") {
    print("REPORT", name, value, note);
    checks_.push_back({{"name", name}, {"status", "REPORT"}, {"value", number(value)}, {"criterion", note}});
  }

  int finish() {
    summary_["checks"] = checks_;
    summary_["status"] = failed_ ? "FAIL" : "PASS";
    write_summary();
    return failed_ ? kExitCheckFailed : kExitPass;
  }

  int abort(const std::string& message) {
    std::cerr << "numerical abort: " << message << '\n';
    std::error_code ec;
    fs::create_directories(out_, ec);
    std::ofstream diag(out_ / "diagnostic.txt");
    diag << "subcommand: " << command_ << "\nversion: " << GEVREY_EULER_VERSION
         << "\nconfig_hash: " << hex64(settings_.hash()) << "\nerror: " << message << "\n\n[config]\n"
         << settings_.canonical();
    summary_["checks"] = checks_;
    summary_["status"] = "ABORT";
    summary_["error"] = message;
    write_summary();
    return kExitNumericalAbort;
  }

 private:
  static void print(const char* status, const std::string& name, double value, const std::string& note) {
    std::printf("%-6s %-28s %.6e%s%s\n", status, name.c_str(), value, note.empty() ? "" : "  ", note.c_str());
  }

  void write_summary() {
    std::ofstream f(out_ / (command_ + "_summary.json"));
    if (f) f << summary_.dump(2) << '\n';
  }

  std::string command_;
  Settings settings_;
  fs::path out_;
  ordered_json summary_;
  ordered_json checks_ = ordered_json::array();
  bool failed_ = false;
};

// ---- parameter resolution ----

bool is_2d_ic(const std::string& ic) { return ic == "taylor-green-2d" || ic == "taylor-green-perturbed"; }

Grid make_grid(const Settings& s, int default_n3, double default_box_mult) {
  const int dim = s.is_auto("grid.dim") ? (is_2d_ic(s.text("sim.ic")) ? 2 : 3) : s.integer("grid.dim");
  const int n = s.is_auto("grid.n") ? (dim == 2 ? 256 : default_n3) : s.integer("grid.n");
  const double mult = s.is_auto("grid.box_mult") ? default_box_mult : s.real("grid.box_mult");
  if (!(mult > 0.0)) throw InvalidArgument("box multiplier must be positive");
  return Grid(dim, n, kPi * mult);
}

WeightParams make_weight(const Settings& s) {
  if (s.is_auto("weight.ell")) return WeightParams{s.text("sim.ic") == "gaussian-vortex" ? 1.0 : 0.0};
  return WeightParams{s.real("weight.ell")};
}

GevreyParams make_gevrey(const Settings& s) {
  GevreyParams g;
  g.s = s.real("gevrey.s");
  g.tau = s.real("gevrey.tau0");
  g.m_max = s.integer("gevrey.m_max");
  g.validate();
  return g;
}

Field make_initial(const Settings& s, const Grid& g, const WeightParams& w) {
  Field u0 = named_initial_condition(s.text("sim.ic"), g, s.seed());
  w.require_admissible(g.dim());
  if (w.ell > 0.0) {
    const double frac = boundary_shell_fraction(u0);
    if (frac > kDefaultShellTolerance) {
      throw ConfigError("initial condition '" + s.text("sim.ic") + "' is not decaying enough for l > 0 on this box" +
                        " (shell fraction " + csv_number(frac) + "); use weight.ell = 0 or a larger box");
    }
  }
  return u0;
}

SimConfig make_sim(const Settings& s, const Grid& g, const WeightParams& w, int m_max) {
  SimConfig cfg;
  cfg.grid = g;
  cfg.weight = w;
  cfg.r = s.integer("norms.r");
  cfg.dt = s.real("sim.dt");
  cfg.t_end = s.real("sim.t_end");
  cfg.cfl_safety = s.real("sim.cfl_safety");
  cfg.monitor_every = s.integer("sim.monitor_every");
  cfg.blowup_factor = s.real("sim.blowup_factor");
  cfg.m_max = m_max;
  cfg.validate();
  return cfg;
}

void record_grid(Session& session, const Grid& g, const WeightParams& w) {
  session.summary()["grid"] = {{"dim", g.dim()}, {"n", g.n()}, {"half_length", g.half_length()}};
  session.summary()["ell"] = w.ell;
}

// ---- subcommands ----

// Energy, divergence and the a priori estimate monitors along one run.
void dynamics_checks(Session& session, const SimResult& run) {
  const auto& h = run.history;
  const double tol = session.settings().real("sim.energy_tolerance");
  double drift = 0.0, div = 0.0;
  bool bkm_ok = true;
  for (std::size_t i = 0; i < h.size(); ++i) {
    drift = std::max(drift, std::abs(h[i].energy - h.front().energy) / h.front().energy);
    div = std::max(div, h[i].div_max);
    if (!std::isfinite(h[i].bkm) || (i > 0 && h[i].bkm < h[i - 1].bkm)) bkm_ok = false;
  }
  session.check("energy_drift", drift < tol, drift, "< " + csv_number(tol));
  session.report("max_divergence", div);
  session.check("bkm_finite_nondecreasing", bkm_ok, h.back().bkm, "finite, nondecreasing");
  if (h.size() >= 3) {
    const auto energy = verify_energy_inequality(h);
    session.check("energy_inequality_bounded", energy.bounded, energy.max_constant, "implied constant finite");
    const auto gw = gronwall_check(h, energy);
    session.check("gronwall_bound", gw.holds, gw.worst_ratio, "||u||_{H^r_l} / bound <= 1");
  }
}

int cmd_simulate(Session& session) {
  const Settings& s = session.settings();
  const Grid g = make_grid(s, 64, 4.0);
  const WeightParams w = make_weight(s);
  const GevreyParams gp = make_gevrey(s);
  const SimConfig cfg = make_sim(s, g, w, gp.m_max);
  const Field u0 = make_initial(s, g, w);
  record_grid(session, g, w);
  session.prepare_output();

  const SimResult run = simulate(u0, cfg);
  {
    auto f = session.csv("monitor.csv");
    write_monitor_csv(f, run.history, cfg.m_max);
  }
  session.summary()["steps"] = run.steps;
  session.summary()["t_final"] = run.history.back().t;
  if (!run.completed()) return session.abort(run.halt_reason);
  dynamics_checks(session, run);
  return session.finish();
}

int cmd_picard(Session& session) {
  const Settings& s = session.settings();
  const Grid g = make_grid(s, 32, 2.0);
  const WeightParams w = make_weight(s);
  PicardConfig cfg;
  cfg.T = s.real("picard.T");
  cfg.n_iters = s.integer("picard.iterations");
  cfg.steps = s.integer("picard.steps");
  cfg.samples = s.integer("picard.samples");
  cfg.r = s.integer("norms.r");
  cfg.weight = w;
  cfg.C = s.real("picard.C");
  cfg.validate();
  const Field u0 = make_initial(s, g, w);
  record_grid(session, g, w);
  session.prepare_output();

  const PicardState st = run_picard(u0, cfg);
  {
    auto f = session.csv("picard.csv");
    write_picard_csv(f, st);
  }
  session.summary()["u0_norm"] = st.u0_norm;
  ordered_json e = ordered_json::array();
  for (const auto& it : st.iterations) e.push_back(number(it.e));
  session.summary()["e"] = e;

  const double e_last = st.iterations.back().e;
  if (st.fit_valid) {
    session.summary()["fit"] = {{"a", st.fit.a}, {"b", st.fit.b}, {"c", st.fit.c}, {"rms", st.fit.rms_residual}};
    session.check("contraction_slope", st.fit.c >= 0.8 && st.fit.c <= 1.2, st.fit.c, "in [0.8, 1.2]");
  } else {
    // Too few resolvable differences: the data sit at a fixed point.
    session.check("fixed_point", e_last < 1e-8, e_last, "e_last < 1e-8");
  }
  if (cfg.C > 0.0) {
    double worst = 0.0;
    for (const auto& it : st.iterations) worst = std::max(worst, it.bound_ratio);
    session.check("uniform_bound", worst <= 1.0, worst, "sup ||u^(n)|| / bound <= 1");
  }
  return session.finish();
}

int cmd_track_radius(Session& session) {
  const Settings& s = session.settings();
  const Grid g = make_grid(s, 32, 2.0);
  const WeightParams w = make_weight(s);
  const GevreyParams gp = make_gevrey(s);
  const SimConfig cfg = make_sim(s, g, w, gp.m_max);
  const double C = s.real("radius.C");
  if (!(C > 0.0)) throw ConfigError("radius.C must be positive");
  const Field u0 = make_initial(s, g, w);
  record_grid(session, g, w);
  session.prepare_output();

  // Spectrum fits at every accepted step, matched to monitor times below.
  std::map<double, double> fits;
  const auto fit_at = [&](double t, const SpectralField& U) {
    try {
      const auto fit = fit_radius(U, gp.s);
      fits[t] = fit.non_decaying ? std::numeric_limits<double>::quiet_NaN() : fit.tau_fit;
    } catch (const InvalidArgument&) {
      fits[t] = std::numeric_limits<double>::quiet_NaN();
    }
  };
  fit_at(0.0, dealias(leray_project(spectral_transform(u0))));
  const SimResult run = simulate(u0, cfg, fit_at);
  {
    auto f = session.csv("monitor.csv");
    write_monitor_csv(f, run.history, cfg.m_max);
  }
  if (!run.completed()) return session.abort(run.halt_reason);

  const double x0 = x_norm(run.history.front().series, gp).value;
  const NormTrajectory traj = NormTrajectory::from_history(run.history, x0);
  const RadiusState st = integrate_tau(traj, C, gp.tau, s.integer("radius.substeps"));
  const double C0 = s.is_auto("radius.C0") ? calibrate_C0(traj, C, gp.tau) : s.real("radius.C0");
  const auto lower = check_lower_bound(st, C0, traj.h_r.front());
  const auto xrep = check_x_norm_bound(run.history, st, gp.s);
  std::vector<double> tau_fit;
  for (double t : st.t) {
    const auto it = fits.find(t);
    tau_fit.push_back(it == fits.end() ? std::numeric_limits<double>::quiet_NaN() : it->second);
  }
  {
    auto f = session.csv("radius.csv");
    write_radius_csv(f, st, lower.bound, tau_fit);
  }

  session.summary()["C"] = C;
  session.summary()["C0"] = C0;
  session.summary()["x0"] = x0;
  session.summary()["tau_final"] = st.tau.back();
  double residual = 0.0;
  for (double r : st.residual) residual = std::max(residual, r);
  session.check("radius_positive", !st.collapsed, st.tau.back(), "tau > 1e-12 tau0 throughout");
  session.check("lower_bound", lower.holds, lower.worst_ratio, "bound / tau <= 1 on " + std::to_string(lower.checked) + " samples");
  session.check("x_norm_bound", xrep.holds, xrep.worst_ratio, "||u||_X / H <= 1");
  session.report("ode_residual", residual);
  if (!tau_fit.empty()) session.report("tau_fit_final", tau_fit.back());
  return session.finish();
}

int cmd_verify_inequalities(Session& session) {
  const Settings& s = session.settings();
  const Grid g = make_grid(s, 32, 2.0);
  if (g.dim() != 3) throw ConfigError("verify-inequalities runs in 3D");
  const WeightParams w = make_weight(s);
  w.require_admissible(3);
  GevreyParams gp = make_gevrey(s);
  const int r = s.integer("norms.r");
  const int members = s.integer("probes.family");
  if (members < 1) throw ConfigError("probes.family must be at least 1");
  if (r < 3) throw ConfigError("norms.r must be at least 3");
  const bool refine = s.boolean("probes.refine");
  record_grid(session, g, w);
  session.prepare_output();

  std::vector<ProbeReport> all;
  std::vector<Field> family;
  for (int i = 0; i < members; ++i) family.push_back(decaying_vortex(g, i, s.seed()));

  const auto collect = [&](const std::vector<Field>& fields) {
    std::map<std::string, std::vector<ProbeReport>> by_probe;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const Field& u = fields[i];
      const auto tag = [&](std::vector<ProbeReport> reps) {
        for (auto& rep : reps) rep.input = "member=" + std::to_string(i) + " " + rep.input;
        return reps;
      };
      auto add = [&](const std::string& key, std::vector<ProbeReport> reps) {
        auto& dst = by_probe[key];
        for (auto& rep : tag(std::move(reps))) dst.push_back(std::move(rep));
      };
      add("product_estimate", sweep_product_estimate(u, r, w));
      add("pressure_estimate", sweep_pressure_estimate(u, r, w));
      add("gradient_embedding", {probe_gradient_embedding(u, w)});
      add("gagliardo_nirenberg", {probe_gn(u)});
      add("calderon_zygmund", sweep_cz(u, w));
    }
    return by_probe;
  };

  const auto coarse = collect(family);
  ordered_json maxima;
  for (const auto& [name, reps] : coarse) {
    const double m = max_ratio(reps);
    maxima[name] = number(m);
    session.check(name + "_finite", std::isfinite(m), m, "max ratio finite");
    all.insert(all.end(), reps.begin(), reps.end());
  }
  session.summary()["max_ratio"] = maxima;

  const double c = 2.0 * std::max(max_ratio(coarse.at("product_estimate")), max_ratio(coarse.at("pressure_estimate")));
  session.summary()["calibrated_C"] = c;
  session.report("calibrated_C", c, "2 max(product, pressure)");

  ordered_json bounds = ordered_json::array();
  for (const auto& u : family) {
    const auto rep = gevrey_bounds(u, gp, w, r);
    bounds.push_back({{"C_ell", rep.C_ell}, {"P_ell", rep.P_ell}, {"C_ell_ratio", number(rep.C_ell_ratio)},
                      {"P_ell_ratio", number(rep.P_ell_ratio)}});
    session.check("gevrey_sums_finite", std::isfinite(rep.C_ell_ratio) && std::isfinite(rep.P_ell_ratio),
                  std::max(rep.C_ell_ratio, rep.P_ell_ratio), "C_l, P_l over brackets finite");
  }
  session.summary()["gevrey_bounds"] = bounds;

  // The cancellation residual needs w = <x>^l d^alpha u resolved; with
  // refinement it is judged on the finer family.
  const double tol = s.real("probes.cancellation_tolerance");
  const auto cancellation = [&](const std::vector<Field>& fields) {
    double worst = 0.0;
    for (const auto& u : fields) {
      for (double ell : {0.0, w.ell}) worst = std::max(worst, max_cancellation_residual(u, r, WeightParams{ell}));
    }
    return worst;
  };
  if (!refine) {
    const double c0 = cancellation(family);
    session.check("cancellation_residual", c0 <= tol, c0, "<= " + csv_number(tol) + " ||w||^2");
  }
  if (refine) {
    const Grid fine(3, 2 * g.n(), g.half_length());
    std::vector<Field> fine_family;
    for (int i = 0; i < members; ++i) fine_family.push_back(decaying_vortex(fine, i, s.seed()));
    const auto finer = collect(fine_family);
    for (const auto& [name, reps] : coarse) {
      const auto& other = finer.at(name);
      double worst = 0.0;
      for (std::size_t i = 0; i < reps.size(); ++i) {
        const double a = reps[i].ratio, b = other[i].ratio;
        if (std::max(a, b) > 1e-12) worst = std::max(worst, std::abs(a - b) / std::max(a, b));
      }
      session.check(name + "_refinement", worst <= 0.1, worst, "relative change n -> 2n <= 0.1");
      all.insert(all.end(), other.begin(), other.end());
    }
    session.report("cancellation_residual_coarse", cancellation(family));
    const double c1 = cancellation(fine_family);
    session.check("cancellation_residual", c1 <= tol, c1, "<= " + csv_number(tol) + " ||w||^2 at n = " + std::to_string(fine.n()));
  }

  {
    auto f = session.csv("probes.csv");
    write_probe_csv(f, all);
  }
  return session.finish();
}

int cmd_verify_combinatorics(Session& session) {
  const Settings& s = session.settings();
  const int m_max = s.integer("combinatorics.m_max");
  const int cases = s.integer("combinatorics.cases");
  const int order = s.integer("combinatorics.domination_order");
  if (m_max < 7) throw ConfigError("combinatorics.m_max must be at least 7");
  if (cases < 0 || order < 0) throw ConfigError("case counts must be non-negative");
  session.prepare_output();

  // Identity on seeded random data.
  std::mt19937_64 rng(s.seed());
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  double worst_identity = 0.0;
  for (int trial = 0; trial < cases; ++trial) {
    const int m = std::uniform_int_distribution<int>(0, 10)(rng);
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
    worst_identity = std::max(worst_identity, std::abs(p.lhs - p.rhs) / std::max(1.0, sx * sy));
  }
  session.check("identity", worst_identity <= 1e-12, worst_identity, "relative gap <= 1e-12");

  auto f = session.csv("combinatorics.csv");
  write_csv_row(f, {"s", "cases", "max_factorization_gap", "sup_A", "sup_A_m", "sup_A_j", "sup_A_prime", "sup_A_prime_m",
                    "sup_A_prime_j", "sup_A_over_majorant", "sup_binomial_ratio"});
  ordered_json sweeps = ordered_json::array();
  for (double gs : {1.0, 1.5, 2.0}) {
    const auto sw = sweep_A(m_max, gs);
    write_csv_row(f, {csv_number(gs), std::to_string(sw.cases), csv_number(sw.max_factorization_gap),
                      csv_number(sw.sup_A), std::to_string(sw.sup_A_m), std::to_string(sw.sup_A_j),
                      csv_number(sw.sup_A_prime), std::to_string(sw.sup_A_prime_m), std::to_string(sw.sup_A_prime_j),
                      csv_number(sw.sup_A_over_majorant), csv_number(sw.sup_binomial_ratio)});
    sweeps.push_back({{"s", gs},
                      {"max_factorization_gap", sw.max_factorization_gap},
                      {"sup_A", sw.sup_A},
                      {"sup_A_prime", sw.sup_A_prime},
                      {"sup_A_over_majorant", sw.sup_A_over_majorant},
                      {"sup_binomial_ratio", sw.sup_binomial_ratio}});
    const std::string tag = "s=" + csv_number(gs).substr(0, 4);
    session.check("factorization_" + tag, sw.max_factorization_gap <= 1e-10, sw.max_factorization_gap, "<= 1e-10");
    session.check("sup_A_finite_" + tag, std::isfinite(sw.sup_A) && std::isfinite(sw.sup_A_prime), sw.sup_A,
                  "sup A' = " + csv_number(sw.sup_A_prime));
  }
  session.summary()["A_sweeps"] = sweeps;

  const auto dom = sweep_binomial_domination(order);
  session.summary()["binomial_domination"] = {{"cases", dom.cases}, {"violations", dom.violations}};
  session.check("binomial_domination", dom.violations == 0, static_cast<double>(dom.violations),
                std::to_string(dom.cases) + " pairs, zero violations");
  return session.finish();
}

int cmd_fit_radius(Session& session) {
  const Settings& s = session.settings();
  const double gs = s.real("gevrey.s");
  Field u = [&] {
    const std::string path = s.text("fit.in");
    if (path.empty()) {
      const Grid g = make_grid(s, 64, 4.0);
      return named_initial_condition(s.text("sim.ic"), g, s.seed());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open snapshot " + path);
    return read_snapshot(in);
  }();
  session.prepare_output();
  const SpectrumFit fit = fit_radius(dealias(spectral_transform(u)), gs);
  {
    auto f = session.csv("spectrum.csv");
    write_csv_row(f, {"k", "amplitude", "model"});
    for (std::size_t i = 0; i < fit.k.size(); ++i) {
      const double model = std::exp(fit.log_A - fit.sigma * std::log(fit.k[i]) - fit.tau_fit * std::pow(fit.k[i], 1.0 / gs));
      write_csv_row(f, {csv_number(fit.k[i]), csv_number(fit.amplitude[i]), csv_number(model)});
    }
  }
  session.summary()["fit"] = {{"s", gs},          {"tau_fit", fit.tau_fit},     {"sigma", fit.sigma},
                              {"log_A", fit.log_A}, {"rms_residual", fit.rms_residual}, {"shells", fit.k.size()}};
  session.report("tau_fit", fit.tau_fit);
  session.check("spectrum_decays", !fit.non_decaying, fit.rms_residual, "fitted decay exceeds noise");
  return session.finish();
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Weighted Gevrey-class experiments for the incompressible Euler equations", "gevrey-euler"};
  app.set_version_flag("--version", GEVREY_EULER_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> flags;
  std::string m_max_flag;
  // Each flag writes straight into the override map under its config key.
  const auto opt = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };
  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI file; flags override its values");
    opt(sub, "--seed", "run.seed", "RNG seed");
    opt(sub, "--out", "run.out", "Output directory");
    opt(sub, "--n", "grid.n", "Points per axis");
    opt(sub, "--dim", "grid.dim", "Dimension (2 or 3)");
    opt(sub, "--box-mult", "grid.box_mult", "Half-length in units of pi");
    opt(sub, "--ell", "weight.ell", "Weight exponent");
    opt(sub, "--gevrey-s", "gevrey.s", "Gevrey index s >= 1");
    opt(sub, "--tau0", "gevrey.tau0", "Initial radius");
    sub->add_option("--m-max", m_max_flag, "Series truncation (sweep limit for verify-combinatorics)");
    opt(sub, "--r", "norms.r", "Sobolev order");
    opt(sub, "--dt", "sim.dt", "Time step");
    opt(sub, "--t-end", "sim.t_end", "Final time");
    opt(sub, "--ic", "sim.ic", "taylor-green-2d | abc | gaussian-vortex | taylor-green-perturbed");
    opt(sub, "--monitor-every", "sim.monitor_every", "Steps between monitor records");
    opt(sub, "--T", "picard.T", "Picard horizon");
    opt(sub, "--iters", "picard.iterations", "Picard iterations");
    opt(sub, "--steps", "picard.steps", "RK4 steps over [0, T]");
    opt(sub, "--samples", "picard.samples", "Sample times for sup_t");
    opt(sub, "--picard-C", "picard.C", "Constant of the uniform Picard bound (0 skips it)");
    opt(sub, "--C", "radius.C", "Constant of the radius ODE");
    opt(sub, "--C0", "radius.C0", "Lower-bound constant (auto calibrates)");
    opt(sub, "--family", "probes.family", "Vortex family size");
    opt(sub, "--refine", "probes.refine", "Repeat probes at 2n and compare (true/false)");
    opt(sub, "--in", "fit.in", "Snapshot file for fit-radius");
  };

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "Integrate Euler and monitor norms"},
      {"picard", "Picard iteration for the linearized system"},
      {"track-radius", "Radius ODE along a simulation"},
      {"verify-inequalities", "Probe the weighted inequalities on the vortex family"},
      {"verify-combinatorics", "Identity, binomial and A-coefficient sweeps"},
      {"fit-radius", "Fit the analyticity radius from a spectrum"},
  };
  for (const auto& [name, help] : commands) common(app.add_subcommand(name, help));

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::optional<Session> session;
  try {
    Settings settings;
    if (!config_path.empty()) settings.load_ini(config_path);
    for (const auto& [k, v] : flags) settings.set(k, v);
    if (!m_max_flag.empty()) settings.set(command == "verify-combinatorics" ? "combinatorics.m_max" : "gevrey.m_max", m_max_flag);
    session.emplace(command, std::move(settings));

    if (command == "simulate") return cmd_simulate(*session);
    if (command == "picard") return cmd_picard(*session);
    if (command == "track-radius") return cmd_track_radius(*session);
    if (command == "verify-inequalities") return cmd_verify_inequalities(*session);
    if (command == "verify-combinatorics") return cmd_verify_combinatorics(*session);
    return cmd_fit_radius(*session);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    return session ? session->abort(e.what()) : kExitNumericalAbort;
  }
}

int run(int argc, const char* const* argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace gevrey::cli

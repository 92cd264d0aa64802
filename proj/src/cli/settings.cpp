#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <filesystem>
#include <sstream>

#include "gevrey/cli.hpp"

namespace gevrey::cli {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Settings::Settings()
    : values_{
          {"run.seed", "20240611"},
          {"run.out", "out"},
          {"grid.dim", "auto"},  // from the initial condition
          {"grid.n", "auto"},    // 64 in 3D, 256 in 2D, 32 for probe sweeps
          {"grid.box_mult", "auto"},  // 4, or 2 where the vortex family is sized for it
          {"weight.ell", "auto"},  // 1 for decaying data, 0 for periodic flows
          {"norms.r", "5"},
          {"gevrey.s", "1"},
          {"gevrey.tau0", "0.5"},
          {"gevrey.m_max", "8"},
          {"sim.ic", "gaussian-vortex"},
          {"sim.dt", "0.01"},
          {"sim.t_end", "1"},
          {"sim.cfl_safety", "0.5"},
          {"sim.monitor_every", "10"},
          {"sim.blowup_factor", "100"},
          {"sim.energy_tolerance", "1e-6"},
          {"picard.T", "1"},
          {"picard.iterations", "10"},
          {"picard.steps", "32"},
          {"picard.samples", "16"},
          {"picard.C", "0"},
          {"radius.C", "0.03"},
          {"radius.C0", "auto"},
          {"radius.substeps", "16"},
          {"probes.family", "3"},
          {"probes.refine", "false"},
          {"probes.cancellation_tolerance", "1e-8"},
          {"combinatorics.m_max", "200"},
          {"combinatorics.cases", "100"},
          {"combinatorics.domination_order", "8"},
          {"fit.in", ""},
      } {}

void Settings::load_ini(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigError("config file not found: " + path);
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("cannot parse config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config key '" + section + "' is outside a section");
    for (const auto& [key, value] : body) set(section + "." + key, value.data());
  }
}

void Settings::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second = value;
}

const std::string& Settings::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

namespace {

template <class T>
T parse(const std::string& key, const std::string& s) {
  T v{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw ConfigError("bad value for " + key + ": '" + s + "'");
  }
  return v;
}

}  // namespace

double Settings::real(const std::string& key) const { return parse<double>(key, text(key)); }
int Settings::integer(const std::string& key) const { return parse<int>(key, text(key)); }
std::uint64_t Settings::seed() const { return parse<std::uint64_t>("run.seed", text("run.seed")); }

bool Settings::boolean(const std::string& key) const {
  const auto& v = text(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad value for " + key + ": '" + v + "'");
}

std::string Settings::canonical() const {
  std::ostringstream out;
  for (const auto& [k, v] : values_) {
    if (k != "run.out") out << k << '=' << v << '\n';
  }
  return out.str();
}

}  // namespace gevrey::cli

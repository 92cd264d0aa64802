#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "gevrey/cli.hpp"

using namespace gevrey::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gevrey_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gevrey-euler");
  return run(args);
}

}  // namespace

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("settings layering and validation") {
  const fs::path dir = scratch("settings");
  {
    std::ofstream ini(dir / "run.ini");
    ini << "[grid]\nn = 48\n\n[sim]\nt_end = 0.5\n";
  }
  Settings s;
  CHECK(s.is_auto("grid.n"));
  s.load_ini((dir / "run.ini").string());
  CHECK(s.integer("grid.n") == 48);
  CHECK(s.real("sim.t_end") == 0.5);
  s.set("grid.n", "64");
  CHECK(s.integer("grid.n") == 64);
  CHECK_THROWS_AS(s.set("grid.points", "8"), ConfigError);
  s.set("sim.dt", "fast");
  CHECK_THROWS_AS(s.real("sim.dt"), ConfigError);
  CHECK_THROWS_AS(s.load_ini((dir / "missing.ini").string()), ConfigError);

  Settings a, b;
  b.set("run.out", "elsewhere");
  CHECK(a.hash() == b.hash());
  b.set("run.seed", "1");
  CHECK(a.hash() != b.hash());
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  CHECK(cli({"verify-combinatorics", "--m-max", "40", "--out", (dir / "ok").string()}) == kExitPass);
  CHECK(cli({"simulate", "--config", (dir / "nope.ini").string()}) == kExitConfigError);
  CHECK(cli({"simulate", "--no-such-flag"}) == kExitConfigError);
  CHECK(cli({"no-such-command"}) == kExitConfigError);
  CHECK(cli({"simulate", "--ic", "taylor-green-2d", "--dt", "-1", "--out", (dir / "neg").string()}) == kExitConfigError);
  {
    std::ofstream ini(dir / "typo.ini");
    ini << "[sim]\nt_ned = 1\n";
  }
  CHECK(cli({"simulate", "--config", (dir / "typo.ini").string()}) == kExitConfigError);

  // A check that cannot pass.
  {
    std::ofstream ini(dir / "strict.ini");
    ini << "[sim]\nic = taylor-green-2d\nt_end = 0.1\nenergy_tolerance = 0\n";
  }
  CHECK(cli({"simulate", "--config", (dir / "strict.ini").string(), "--n", "32", "--out", (dir / "strict").string()}) ==
        kExitCheckFailed);

  // The blow-up guard halts a growing vortex at once: numerical abort with a
  // diagnostic file.
  {
    std::ofstream ini(dir / "guard.ini");
    ini << "[sim]\nblowup_factor = 1.000001\nt_end = 0.2\n";
  }
  const fs::path out = dir / "guard";
  CHECK(cli({"simulate", "--config", (dir / "guard.ini").string(), "--n", "32", "--box-mult", "2", "--out",
             out.string()}) == kExitNumericalAbort);
  CHECK(fs::exists(out / "diagnostic.txt"));
  CHECK(slurp(out / "diagnostic.txt").find("error:") != std::string::npos);
}

TEST_CASE("identical config and seed give identical bytes") {
  const fs::path dir = scratch("determinism");
  const auto once = [&](const std::string& tag) {
    const fs::path out = dir / tag;
    REQUIRE(cli({"simulate", "--ic", "taylor-green-perturbed", "--n", "32", "--t-end", "0.2", "--seed", "5", "--out",
                 out.string()}) == kExitPass);
    REQUIRE(cli({"verify-combinatorics", "--m-max", "60", "--seed", "5", "--out", out.string()}) == kExitPass);
    return slurp(out / "monitor.csv") + slurp(out / "combinatorics.csv");
  };
  const std::string a = once("a"), b = once("b");
  CHECK(!a.empty());
  CHECK(a == b);

  REQUIRE(cli({"simulate", "--ic", "taylor-green-perturbed", "--n", "32", "--t-end", "0.2", "--seed", "6", "--out",
               (dir / "c").string()}) == kExitPass);
  CHECK(slurp(dir / "c" / "monitor.csv") != slurp(dir / "a" / "monitor.csv"));
}

TEST_CASE("CSV provenance line and header") {
  const fs::path out = scratch("provenance");
  REQUIRE(cli({"verify-combinatorics", "--m-max", "30", "--out", out.string()}) == kExitPass);
  Settings expected;
  expected.set("combinatorics.m_max", "30");
  std::ostringstream hash;
  hash << std::hex;
  hash.width(16);
  hash.fill('0');
  hash << expected.hash();
  CHECK(first_line(out / "combinatorics.csv") ==
        "# gevrey-euler 0.1.0 config_hash=" + hash.str() + " subcommand=verify-combinatorics");

  REQUIRE(cli({"fit-radius", "--n", "32", "--box-mult", "2", "--out", out.string()}) == kExitPass);
  std::ifstream in(out / "spectrum.csv");
  std::string provenance, header;
  std::getline(in, provenance);
  std::getline(in, header);
  CHECK(provenance.rfind("# gevrey-euler 0.1.0 config_hash=", 0) == 0);
  CHECK(header == "k,amplitude,model");
  CHECK(fs::exists(out / "fit-radius_summary.json"));
}

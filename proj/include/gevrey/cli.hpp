#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gevrey/error.hpp"

namespace gevrey::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalAbort = 3;

/// Bad flag, unreadable config file, unknown key or unparsable value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// Flat "section.key" -> value store. Layers apply in order: built-in
/// defaults, the INI file, then command-line flags. Unknown keys are rejected
/// so typos in a config file do not silently fall back to defaults.
class Settings {
 public:
  Settings();

  void load_ini(const std::string& path);
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& text(const std::string& key) const;
  double real(const std::string& key) const;
  int integer(const std::string& key) const;
  std::uint64_t seed() const;
  bool boolean(const std::string& key) const;
  bool is_auto(const std::string& key) const { return text(key) == "auto"; }

  /// Sorted key=value lines, run.out excluded: the input to the config hash.
  std::string canonical() const;
  std::uint64_t hash() const { return fnv1a(canonical()); }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Program entry: `gevrey-euler <subcommand> [flags]`. argv[0] is the program
/// name. Returns one of the kExit* codes.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace gevrey::cli

#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "jury/random.hpp"
#include "jury/weighting.hpp"

namespace jury::cli {

/// Unparseable or inconsistent configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One configuration value and where it came from ("run.conf:3",
/// "--iters", "manifest"), used in diagnostics.
struct Setting {
  std::string value;
  std::string origin;
};

/// Flat key/value settings after merging config file, manifest and flags.
class Settings {
 public:
  void set(const std::string& key, std::string value, std::string origin);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const Setting* find(const std::string& key) const;
  const std::map<std::string, Setting>& all() const noexcept { return values_; }

  /// Later layers win.
  void merge(const Settings& overrides);

 private:
  std::map<std::string, Setting> values_;
};

/// Parses `key = value` lines; `#` starts a comment; blank lines are
/// ignored. Keys outside `allowed` are rejected with the offending line.
Settings parse_flat_config(std::istream& in, const std::string& source,
                           const std::vector<std::string>& allowed);

double parse_double(const Setting& s, const std::string& key);
std::uint64_t parse_uint(const Setting& s, const std::string& key);
bool parse_bool(const Setting& s, const std::string& key);
std::vector<double> parse_double_list(const Setting& s, const std::string& key);
std::vector<std::size_t> parse_count_list(const Setting& s, const std::string& key);
/// "lo:hi:step".
std::vector<double> parse_grid(const Setting& s, const std::string& key);
/// "uniform:lo:hi", "truncnormal:mean:sigma:lo:hi", "truncexp:b:lo:hi[:mirror]".
rng::DistributionSpec parse_distribution(const Setting& s, const std::string& key);
/// "signed" or "clamped".
WeightingMode parse_mode(const Setting& s, const std::string& key);

}  // namespace jury::cli

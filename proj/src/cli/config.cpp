#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "jury/experiments.hpp"

namespace jury::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void fail(const Setting& s, const std::string& key, const std::string& what) {
  throw ConfigError(s.origin + ": " + key + ": " + what + " (got '" + s.value + "')");
}

double to_double(const std::string& text, const Setting& s, const std::string& key) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    fail(s, key, "expected a finite number");
  }
  return v;
}

std::uint64_t to_uint(const std::string& text, const Setting& s, const std::string& key) {
  std::uint64_t v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc{} || ptr != last) fail(s, key, "expected a nonnegative integer");
  return v;
}

}  // namespace

void Settings::set(const std::string& key, std::string value, std::string origin) {
  values_[key] = Setting{std::move(value), std::move(origin)};
}

const Setting* Settings::find(const std::string& key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

void Settings::merge(const Settings& overrides) {
  for (const auto& [k, v] : overrides.values_) values_[k] = v;
}

Settings parse_flat_config(std::istream& in, const std::string& source,
                           const std::vector<std::string>& allowed) {
  Settings out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const std::string where = source + ":" + std::to_string(lineno);
    const auto hash = line.find('#');
    const std::string body = trim(line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
    out.set(key, value, where);
  }
  return out;
}

double parse_double(const Setting& s, const std::string& key) { return to_double(s.value, s, key); }

std::uint64_t parse_uint(const Setting& s, const std::string& key) { return to_uint(s.value, s, key); }

bool parse_bool(const Setting& s, const std::string& key) {
  if (s.value == "true" || s.value == "1" || s.value == "yes") return true;
  if (s.value == "false" || s.value == "0" || s.value == "no") return false;
  fail(s, key, "expected true or false");
}

std::vector<double> parse_double_list(const Setting& s, const std::string& key) {
  std::vector<double> out;
  for (const auto& part : split(s.value, ',')) out.push_back(to_double(part, s, key));
  return out;
}

std::vector<std::size_t> parse_count_list(const Setting& s, const std::string& key) {
  std::vector<std::size_t> out;
  for (const auto& part : split(s.value, ',')) {
    out.push_back(static_cast<std::size_t>(to_uint(part, s, key)));
  }
  return out;
}

std::vector<double> parse_grid(const Setting& s, const std::string& key) {
  const auto parts = split(s.value, ':');
  if (parts.size() != 3) fail(s, key, "expected lo:hi:step");
  const double lo = to_double(parts[0], s, key);
  const double hi = to_double(parts[1], s, key);
  const double step = to_double(parts[2], s, key);
  if (!(step > 0.0) || hi < lo) fail(s, key, "need step > 0 and hi >= lo");
  return make_grid(lo, hi, step);
}

rng::DistributionSpec parse_distribution(const Setting& s, const std::string& key) {
  const auto parts = split(s.value, ':');
  const std::string& kind = parts.front();
  const auto num = [&](std::size_t i) { return to_double(parts[i], s, key); };
  if (kind == "uniform") {
    if (parts.size() != 3) fail(s, key, "expected uniform:lo:hi");
    return rng::Uniform{num(1), num(2)};
  }
  if (kind == "truncnormal" || kind == "normal" || kind == "gauss") {
    if (parts.size() != 5) fail(s, key, "expected truncnormal:mean:sigma:lo:hi");
    return rng::TruncNormal{num(1), num(2), num(3), num(4)};
  }
  if (kind == "truncexp" || kind == "exp") {
    const bool mirrored = parts.size() == 5 && parts[4] == "mirror";
    if (parts.size() != 4 && !mirrored) fail(s, key, "expected truncexp:b:lo:hi[:mirror]");
    return rng::TruncExp{num(1), num(2), num(3), mirrored};
  }
  fail(s, key, "unknown distribution (uniform, truncnormal, truncexp)");
}

WeightingMode parse_mode(const Setting& s, const std::string& key) {
  if (s.value == "signed") return WeightingMode::signed_log_odds;
  if (s.value == "clamped") return WeightingMode::clamped_nonnegative;
  fail(s, key, "expected signed or clamped");
}

}  // namespace jury::cli

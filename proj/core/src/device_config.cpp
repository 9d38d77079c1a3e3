#include "bswap/device_config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bswap/errors.hpp"
#include "bswap/units.hpp"

namespace bswap {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& key, const std::string& value, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || errno != 0 || !std::isfinite(x))
    throw ConfigError(where + ": value of '" + key + "' is not a finite number: '" + value + "'");
  return x;
}

const std::set<std::string> kKnown = {"q1.freq_GHz", "q1.anharm_GHz", "q2.freq_GHz", "q2.anharm_GHz", "lambda",
                                      "J_GHz",       "target_zz_kHz", "levels",      "q1.t1_us",      "q2.t1_us"};

}  // namespace

DeviceConfig parse_device_config(const std::string& text, const std::string& source,
                                 std::optional<int> levels_override) {
  std::map<std::string, double> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kKnown.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    if (kv.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    kv[key] = to_number(key, value, where);
  }

  for (const char* k : {"q1.freq_GHz", "q1.anharm_GHz", "q2.freq_GHz", "q2.anharm_GHz"})
    if (!kv.count(k)) throw ConfigError(source + ": missing required key '" + k + "'");
  const bool has_j = kv.count("J_GHz") > 0;
  const bool has_zz = kv.count("target_zz_kHz") > 0;
  if (has_j && has_zz) throw ConfigError(source + ": specify exactly one of J_GHz and target_zz_kHz, not both");
  if (!has_j && !has_zz) throw ConfigError(source + ": specify one of J_GHz or target_zz_kHz");

  int levels = 3;
  if (kv.count("levels")) {
    const double d = kv["levels"];
    if (d != std::floor(d) || d < 2 || d > 8) throw ConfigError(source + ": levels must be an integer in [2, 8]");
    levels = static_cast<int>(d);
  }
  if (levels_override) {
    if (*levels_override < 2 || *levels_override > 8) throw ConfigError("levels override must lie in [2, 8]");
    levels = *levels_override;
  }

  DeviceConfig cfg;
  cfg.source = source;
  DeviceParams& dev = cfg.device;
  dev.q1 = {units::ghz(kv["q1.freq_GHz"]), units::ghz(kv["q1.anharm_GHz"])};
  dev.q2 = {units::ghz(kv["q2.freq_GHz"]), units::ghz(kv["q2.anharm_GHz"])};
  dev.lambda = kv.count("lambda") ? kv["lambda"] : 1.0;
  dev.space = FockSpace(levels);
  try {
    dev.validate();
  } catch (const DomainError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  for (const char* k : {"q1.t1_us", "q2.t1_us"})
    if (kv.count(k) && !(kv[k] > 0)) throw ConfigError(source + ": '" + std::string(k) + "' must be positive");
  if (kv.count("q1.t1_us")) cfg.t1_q1 = units::us(kv["q1.t1_us"]);
  if (kv.count("q2.t1_us")) cfg.t1_q2 = units::us(kv["q2.t1_us"]);

  if (has_j) {
    dev.J = units::ghz(kv["J_GHz"]);
  } else {
    cfg.target_zz = units::khz(kv["target_zz_kHz"]);
    dev.J = fit_J(dev, *cfg.target_zz);
  }
  return cfg;
}

DeviceConfig load_device_config(const std::string& path, std::optional<int> levels_override) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open device file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_device_config(ss.str(), path, levels_override);
}

}  // namespace bswap

#include "pmfht/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "pmfht/io.hpp"

namespace pmfht {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxInt = 9.007199254740992e15;  // 2^53, exact in double

}  // namespace

const std::vector<Config::KeySpec>& Config::registry() {
  using T = Type;
  static const std::vector<KeySpec> specs = {
      {"alpha", T::real, -8.0, 8.0, "fractional order"},
      {"alpha_grid", T::real_array, -8.0, 8.0, "orders scanned by the sweep"},
      {"bandwidth", T::integer, 1, 1e9, "number of retained low modes"},
      {"burn_in", T::integer, 0, 1e6, "discarded leading chaos iterates"},
      {"calibration_trials", T::integer, 1, 1e6, "target-free trials for the threshold"},
      {"cipher", T::text, 0, 0, "ciphertext file path"},
      {"cloud", T::text, 0, 0, "input point cloud path (.xyz/.txt/.ply)"},
      {"cube", T::text, 0, 0, "radar cube data path (.csv/.bin)"},
      {"cube_meta", T::text, 0, 0, "radar cube sidecar JSON path"},
      {"henon_a", T::real, 0.0, 4.0, "quadratic map coefficient"},
      {"henon_b", T::real, -1.0, 1.0, "linear feedback coefficient"},
      {"henon_u0", T::real, -2.0, 2.0, "orbit seed u0"},
      {"henon_v0", T::real, -2.0, 2.0, "orbit seed v0"},
      {"key_alpha_fwd", T::real_array, -8.0, 8.0, "per-axis encryption orders"},
      {"key_alpha_inv", T::real_array, -8.0, 8.0, "per-axis decryption orders"},
      {"lbo_delta", T::real, 0.0, kInf, "kernel truncation radius (0 = auto)"},
      {"lbo_k_fallback", T::integer, 3, 1e6, "neighbor floor for sparse disks"},
      {"lbo_r", T::real, 0.0, kInf, "tangent/cell neighborhood radius (0 = auto)"},
      {"lbo_t", T::real, 0.0, kInf, "heat kernel bandwidth (0 = auto)"},
      {"noise_db", T::real, -300.0, 300.0, "receiver noise relative to clutter, dB"},
      {"out", T::text, 0, 0, "primary output path"},
      {"pfa", T::real, 1e-9, 0.999999, "false alarm probability"},
      {"realizations", T::integer, 1, 1e6, "supervised pairs per filter design"},
      {"reference", T::text, 0, 0, "secondary output path"},
      {"sample_indices", T::real_array, 0, 1e9, "explicit sample vertices"},
      {"samples", T::integer, 1, 1e9, "sample count for plan search"},
      {"scr_db", T::real, -100.0, 100.0, "signal-to-clutter ratio, dB"},
      {"scr_grid", T::real_array, -100.0, 100.0, "SCR grid for detection curves"},
      {"seed", T::integer, 0, kMaxInt, "deterministic stream seed"},
      {"signal", T::text, 0, 0, "per-vertex signal file (one value per line)"},
      {"target_cell", T::integer, 0, 1e9, "range cell carrying the target"},
      {"token", T::text, 0, 0, "geometry token path"},
      {"trials", T::integer, 1, 1e6, "Monte Carlo trials per SCR"},
      {"velocity_mps", T::real, -1e6, 1e6, "target radial velocity"},
      {"window", T::integer, 1, 1e6, "reference estimator width (odd)"},
  };
  return specs;
}

const Config::KeySpec& Config::spec_for(const std::string& key) {
  for (const KeySpec& spec : registry()) {
    if (key == spec.name) return spec;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

void Config::check_range(const KeySpec& spec, double value) const {
  if (!std::isfinite(value) || value < spec.min || value > spec.max) {
    std::ostringstream msg;
    msg << "config key '" << spec.name << "' value " << value << " outside [" << spec.min
        << ", " << spec.max << "]";
    throw ConfigError(msg.str());
  }
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

Config Config::parse(const std::string& text, const std::string& name) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(name + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(name + ": top level must be a JSON object");

  Config config;
  for (const auto& [key, value] : j.items()) {
    const KeySpec& spec = spec_for(key);
    switch (spec.type) {
      case Type::integer: {
        if (!value.is_number_integer()) {
          throw ConfigError(name + ": key '" + key + "' must be an integer");
        }
        config.set_int(key, value.get<std::int64_t>());
        break;
      }
      case Type::real: {
        if (!value.is_number()) {
          throw ConfigError(name + ": key '" + key + "' must be a number");
        }
        config.set_real(key, value.get<double>());
        break;
      }
      case Type::text: {
        if (!value.is_string()) {
          throw ConfigError(name + ": key '" + key + "' must be a string");
        }
        config.set_text(key, value.get<std::string>());
        break;
      }
      case Type::real_array: {
        if (!value.is_array()) {
          throw ConfigError(name + ": key '" + key + "' must be an array of numbers");
        }
        std::vector<double> items;
        for (const auto& e : value) {
          if (!e.is_number()) {
            throw ConfigError(name + ": key '" + key + "' must be an array of numbers");
          }
          items.push_back(e.get<double>());
        }
        config.set_array(key, items);
        break;
      }
    }
  }
  return config;
}

std::string Config::dump() const {
  // std::map keeps keys sorted, which makes the dump canonical.
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : values_) {
    if (const auto* i = std::get_if<std::int64_t>(&value)) {
      j[key] = *i;
    } else if (const auto* d = std::get_if<double>(&value)) {
      j[key] = *d;
    } else if (const auto* s = std::get_if<std::string>(&value)) {
      j[key] = *s;
    } else {
      j[key] = std::get<std::vector<double>>(value);
    }
  }
  return j.dump(2) + "\n";
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return std::get<std::int64_t>(it->second);
}

double Config::get_real(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) {
    return static_cast<double>(*i);
  }
  return std::get<double>(it->second);
}

std::string Config::get_text(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return std::get<std::string>(it->second);
}

std::vector<double> Config::get_array(const std::string& key,
                                      const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return std::get<std::vector<double>>(it->second);
}

void Config::set_int(const std::string& key, std::int64_t value) {
  const KeySpec& spec = spec_for(key);
  if (spec.type != Type::integer) throw ConfigError("key '" + key + "' is not an integer");
  check_range(spec, static_cast<double>(value));
  values_[key] = value;
}

void Config::set_real(const std::string& key, double value) {
  const KeySpec& spec = spec_for(key);
  if (spec.type != Type::real) throw ConfigError("key '" + key + "' is not a real");
  check_range(spec, value);
  values_[key] = value;
}

void Config::set_text(const std::string& key, const std::string& value) {
  const KeySpec& spec = spec_for(key);
  if (spec.type != Type::text) throw ConfigError("key '" + key + "' is not a string");
  values_[key] = value;
}

void Config::set_array(const std::string& key, const std::vector<double>& value) {
  const KeySpec& spec = spec_for(key);
  if (spec.type != Type::real_array) throw ConfigError("key '" + key + "' is not an array");
  for (double v : value) check_range(spec, v);
  values_[key] = value;
}

}  // namespace pmfht

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "pmfht/types.hpp"

namespace pmfht {

/// Flat key-value run configuration backed by a single JSON object. Keys are
/// drawn from a fixed registry with per-key type and bounds; unknown keys and
/// out-of-range values are rejected at load time. `dump` is canonical
/// (sorted keys, round-trip numeric formatting), so dump-after-load is a
/// normal form.
class Config {
 public:
  using Value = std::variant<std::int64_t, double, std::string, std::vector<double>>;

  enum class Type { integer, real, text, real_array };

  struct KeySpec {
    const char* name;
    Type type;
    double min;  // inclusive; applied to integer/real and array elements
    double max;  // inclusive
    const char* doc;
  };

  static const std::vector<KeySpec>& registry();

  static Config load(const std::string& path);
  static Config parse(const std::string& text, const std::string& name = "<config>");

  std::string dump() const;

  bool has(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_real(const std::string& key, double fallback) const;
  std::string get_text(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_array(const std::string& key, const std::vector<double>& fallback) const;

  /// Setters run the same validation as `parse`; used for CLI overrides.
  void set_int(const std::string& key, std::int64_t value);
  void set_real(const std::string& key, double value);
  void set_text(const std::string& key, const std::string& value);
  void set_array(const std::string& key, const std::vector<double>& value);

  const std::map<std::string, Value>& values() const { return values_; }

 private:
  static const KeySpec& spec_for(const std::string& key);
  void check_range(const KeySpec& spec, double value) const;

  std::map<std::string, Value> values_;
};

}  // namespace pmfht

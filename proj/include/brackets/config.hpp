#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace brackets::config {

// Flat key=value config format:
//   - one `key = value` pair per line; '#' starts a comment
//   - duplicate keys are an error, except `axis.<name>` keys, whose repeats
//     build a grid axis in declaration order
//   - an axis value may be a single number or an inclusive range
//     `start:step:stop`
struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct Axis {
  std::string name;
  std::vector<double> values;
};

class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& source_name);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;  // ConfigError when missing
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  std::vector<std::int64_t> get_int_list(const std::string& key) const;  // comma separated

  // Grid axes from axis.* keys, in first-appearance order.
  const std::vector<Axis>& axes() const { return axes_; }
  const Axis* find_axis(const std::string& name) const;

  const std::vector<Entry>& entries() const { return entries_; }
  const std::string& source_name() const { return source_; }

 private:
  const Entry* find(const std::string& key) const;

  std::string source_;
  std::vector<Entry> entries_;  // scalar keys only
  std::vector<Axis> axes_;
};

}  // namespace brackets::config

#include "brackets/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "brackets/errors.hpp"

namespace brackets::config {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& source, std::size_t line, const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(source + ":" + std::to_string(line) + ": field '" + key + "': not a number: '" + text + "'");
  }
}

std::vector<double> parse_axis_value(const std::string& source, std::size_t line, const std::string& key,
                                     const std::string& text) {
  const auto first = text.find(':');
  if (first == std::string::npos) {
    return {parse_double(source, line, key, text)};
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos) {
    throw ConfigError(source + ":" + std::to_string(line) + ": field '" + key +
                      "': range must be start:step:stop");
  }
  const double start = parse_double(source, line, key, text.substr(0, first));
  const double step = parse_double(source, line, key, text.substr(first + 1, second - first - 1));
  const double stop = parse_double(source, line, key, text.substr(second + 1));
  if (!(step > 0.0) || stop < start) {
    throw ConfigError(source + ":" + std::to_string(line) + ": field '" + key +
                      "': range needs step > 0 and stop >= start");
  }
  const std::size_t count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = start + static_cast<double>(i) * step;
  return values;
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& source_name) {
  Config cfg;
  cfg.source_ = source_name;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source_name + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(source_name + ":" + std::to_string(line_no) + ": empty key");
    }
    if (value.empty()) {
      throw ConfigError(source_name + ":" + std::to_string(line_no) + ": field '" + key + "': empty value");
    }
    if (key.rfind("axis.", 0) == 0) {
      const std::string axis_name = key.substr(5);
      if (axis_name.empty()) {
        throw ConfigError(source_name + ":" + std::to_string(line_no) + ": axis key needs a name");
      }
      auto values = parse_axis_value(source_name, line_no, key, value);
      Axis* axis = nullptr;
      for (Axis& a : cfg.axes_) {
        if (a.name == axis_name) axis = &a;
      }
      if (axis == nullptr) {
        cfg.axes_.push_back(Axis{axis_name, {}});
        axis = &cfg.axes_.back();
      }
      axis->values.insert(axis->values.end(), values.begin(), values.end());
    } else {
      if (cfg.find(key) != nullptr) {
        throw ConfigError(source_name + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
      }
      cfg.entries_.push_back(Entry{key, value, line_no});
    }
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_string(text.str(), path);
}

const Entry* Config::find(const std::string& key) const {
  for (const Entry& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

bool Config::has(const std::string& key) const { return find(key) != nullptr; }

std::string Config::get_string(const std::string& key) const {
  const Entry* e = find(key);
  if (e == nullptr) throw ConfigError(source_ + ": missing required field '" + key + "'");
  return e->value;
}

std::string Config::get_string_or(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  return e == nullptr ? fallback : e->value;
}

double Config::get_double(const std::string& key) const {
  const Entry* e = find(key);
  if (e == nullptr) throw ConfigError(source_ + ": missing required field '" + key + "'");
  return parse_double(source_, e->line, key, e->value);
}

double Config::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key) const {
  const Entry* e = find(key);
  if (e == nullptr) throw ConfigError(source_ + ": missing required field '" + key + "'");
  try {
    std::size_t used = 0;
    const long long v = std::stoll(e->value, &used);
    if (used != e->value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(source_ + ":" + std::to_string(e->line) + ": field '" + key + "': not an integer: '" +
                      e->value + "'");
  }
}

std::int64_t Config::get_int_or(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<std::int64_t> Config::get_int_list(const std::string& key) const {
  const Entry* e = find(key);
  if (e == nullptr) throw ConfigError(source_ + ": missing required field '" + key + "'");
  std::vector<std::int64_t> values;
  std::istringstream in(e->value);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const std::string t = trim(item);
      values.push_back(std::stoll(t, &used));
      if (used != t.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError(source_ + ":" + std::to_string(e->line) + ": field '" + key +
                        "': not an integer list: '" + e->value + "'");
    }
  }
  if (values.empty()) {
    throw ConfigError(source_ + ":" + std::to_string(e->line) + ": field '" + key + "': empty list");
  }
  return values;
}

const Axis* Config::find_axis(const std::string& name) const {
  for (const Axis& a : axes_) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

}  // namespace brackets::config

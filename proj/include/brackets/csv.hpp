#pragma once

#include <string>
#include <vector>

namespace brackets::csv {

// Shortest representation that round-trips the exact double value.
std::string format_double(double value);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string render(const Table& table);  // comma separated, LF endings

// write-then-rename so readers never observe a partial file
void write_atomic(const std::string& path, const std::string& contents);

Table read_file(const std::string& path);

}  // namespace brackets::csv

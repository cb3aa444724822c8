#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qmbench {

// Plot-ready delimited table: '#' comment header, one CSV row per entry,
// floats printed with 17 significant digits so reruns are byte-identical.
struct Table {
  std::string name;  // file stem; written as <name>.csv
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string render_table_csv(const Table& table);

// Shortest round-trip-exact decimal for a double (printf %.17g).
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace qmbench

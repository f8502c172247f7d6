#include "cli/csv.hpp"

#include <cstdio>
#include <sstream>

#include "jury/format.hpp"

namespace jury::cli {

void write_csv(std::ostream& out, const ResultTable& table) {
  out << table.x_label << ",accuracy_mean,accuracy_stderr,iterations\n";
  for (const auto& row : table.rows) {
    out << format_double(row.x) << ',' << format_double(row.accuracy_mean) << ','
        << format_double(row.accuracy_stderr) << ',' << row.iterations << '\n';
  }
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace jury::cli

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace zparam {

// %.17g: enough digits that reading the text back gives the same double.
std::string format_real(double v);

// Shortest fixed-point text that round-trips, used in file names
// (0.18, 0.0001, 1).
std::string format_short(double v);

// Two-column numeric CSV, e.g. `epoch,error`.
struct Table2 {
  std::string header_x;
  std::string header_y;
  std::vector<double> x;
  std::vector<double> y;
};

void write_table(std::ostream& out, const Table2& table);
Table2 read_table(std::istream& in);

// Writes/reads `epoch,<column>` with epochs 0..n-1.
void write_curve_csv(const std::filesystem::path& path, std::string_view column,
                     const std::vector<double>& values);
std::vector<double> read_curve_csv(const std::filesystem::path& path);

// Opens for writing, creating parent directories. Throws IoError with the path.
std::ofstream open_output(const std::filesystem::path& path);

} // namespace zparam

#include "zparam/csv_io.hpp"

#include "zparam/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace zparam {

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_short(double v) {
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

void write_table(std::ostream& out, const Table2& table) {
  if (table.x.size() != table.y.size())
    throw ShapeMismatch("write_table: column lengths differ");
  out << table.header_x << ',' << table.header_y << '\n';
  for (std::size_t i = 0; i < table.x.size(); ++i)
    out << format_real(table.x[i]) << ',' << format_real(table.y[i]) << '\n';
}

namespace {

double parse_real(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec == std::errc() && res.ptr == s.data() + s.size())
    return v;
  // from_chars rejects the inf/nan spellings some writers use.
  if (s == "nan" || s == "-nan")
    return std::nan("");
  if (s == "inf")
    return HUGE_VAL;
  if (s == "-inf")
    return -HUGE_VAL;
  throw IoError("not a number: '" + std::string(s) + "'");
}

} // namespace

Table2 read_table(std::istream& in) {
  Table2 t;
  std::string line;
  if (!std::getline(in, line))
    throw IoError("empty CSV");
  auto comma = line.find(',');
  if (comma == std::string::npos)
    throw IoError("CSV header needs two columns: " + line);
  t.header_x = line.substr(0, comma);
  t.header_y = line.substr(comma + 1);
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    comma = line.find(',');
    if (comma == std::string::npos)
      throw IoError("malformed CSV row: " + line);
    t.x.push_back(parse_real(std::string_view(line).substr(0, comma)));
    t.y.push_back(parse_real(std::string_view(line).substr(comma + 1)));
  }
  return t;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path(), ec);
  if (ec)
    throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open for writing: " + path.string());
  return out;
}

void write_curve_csv(const std::filesystem::path& path, std::string_view column,
                     const std::vector<double>& values) {
  auto out = open_output(path);
  out << "epoch," << column << '\n';
  for (std::size_t i = 0; i < values.size(); ++i)
    out << i << ',' << format_real(values[i]) << '\n';
  if (!out)
    throw IoError("write failed: " + path.string());
}

std::vector<double> read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open for reading: " + path.string());
  try {
    return read_table(in).y;
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

} // namespace zparam

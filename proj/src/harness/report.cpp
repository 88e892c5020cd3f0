#include "umbilic/harness/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace umbilic::harness {

namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << quote(cells[i]);
  }
  out << "\r\n";
}

std::ofstream open(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return "";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::invalid_argument("CSV row width does not match header");
  rows_.push_back(std::move(cells));
}

void CsvTable::write(std::ostream& out) const {
  write_line(out, header_);
  for (const auto& row : rows_) write_line(out, row);
}

void emit_json(const Json& report, const std::optional<std::string>& path, std::ostream& fallback) {
  if (path) {
    auto f = open(*path);
    f << report.dump(2) << '\n';
    if (!f) throw std::runtime_error("failed writing '" + *path + "'");
  } else {
    fallback << report.dump(2) << '\n';
  }
}

void emit_csv(const CsvTable& table, const std::optional<std::string>& path, std::ostream& fallback) {
  if (path) {
    auto f = open(*path);
    table.write(f);
    if (!f) throw std::runtime_error("failed writing '" + *path + "'");
  } else {
    table.write(fallback);
  }
}

}  // namespace umbilic::harness

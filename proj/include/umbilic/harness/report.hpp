#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace umbilic::harness {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal; empty for non-finite values.
std::string format_number(double v);

/// Non-finite values become null.
Json json_number(double v);

/// RFC 4180 table: CRLF line ends, fields quoted when they contain
/// separators, quotes or line breaks.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  void write(std::ostream& out) const;
  std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to `path` when set, else to `fallback`. Throws std::runtime_error on I/O failure.
void emit_json(const Json& report, const std::optional<std::string>& path, std::ostream& fallback);
void emit_csv(const CsvTable& table, const std::optional<std::string>& path, std::ostream& fallback);

}  // namespace umbilic::harness

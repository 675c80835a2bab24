#pragma once

// Report plumbing shared by the command-line runner: schema version, lossless
// number rendering and a small CSV table.

#include <iosfwd>
#include <string>
#include <vector>

#include "dasep/numeric.hpp"

namespace dasep {

/// Embedded in every CSV header and JSON report.
std::string report_schema_version();

/// Shortest decimal string that parses back to the same double.
std::string format_number(double value);

/// "p/r", or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }

  /// A "# schema: ..." comment line, the header, then the rows.
  void write(std::ostream& os) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace dasep

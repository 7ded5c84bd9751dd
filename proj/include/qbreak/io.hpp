#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "qbreak/dynamics.hpp"
#include "qbreak/ehrenfest.hpp"
#include "qbreak/spectrum.hpp"

namespace qbreak::io {

inline constexpr const char* kSchemaLine = "# schema=v1";

enum class Format { Csv, Json };

Format parse_format(const std::string& text);

using Cell = std::variant<long long, double, std::string>;

// A flat table: the one data model behind both output formats.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  std::size_t column_index(const std::string& name) const;  // throws ConfigError
};

// CSV: schema comment, header, rows. Doubles use %.17g so that a run is
// reproducible byte for byte.
void write_csv(std::ostream& out, const Table& table);
// JSON: {"schema": "v1", "columns": [...], "rows": [[...], ...]}
void write_json(std::ostream& out, const Table& table);
void write_table(std::ostream& out, const Table& table, Format format);
// Writes to path, or to stdout when path is empty or "-".
void write_table(const std::string& path, const Table& table, Format format);

// Inverse of the writers. Every cell comes back as a string or a double.
Table read_csv(std::istream& in);
Table read_json(std::istream& in);
Table read_table(const std::string& path);  // format from the content

Table ehrenfest_table(const std::vector<EhrenfestPoint>& points);
std::vector<EhrenfestPoint> ehrenfest_points(const Table& table);
Table spectrum_table(const SpectralWindow& window);
Table overlap_table(const OverlapSet& overlaps);
Table density_table(const std::vector<DensityBin>& bins);
Table wavefunction_table(const EigenState& state);

}  // namespace qbreak::io

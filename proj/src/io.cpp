#include "qbreak/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "qbreak/errors.hpp"

namespace qbreak::io {
namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) return *d;
  return std::get<std::string>(c);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Cell parse_cell(const std::string& text) {
  if (text.empty()) return text;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() + text.size()) return v;
  return text;
}

double as_double(const Cell& c, const std::string& column) {
  if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  throw ConfigError("column '" + column + "' holds a non-numeric value");
}

}  // namespace

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw ConfigError("unknown format '" + text + "' (expected csv or json)");
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw ConfigError("row width does not match the header");
  rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw ConfigError("missing column '" + name + "'");
}

void write_csv(std::ostream& out, const Table& table) {
  out << kSchemaLine << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json doc;
  doc["schema"] = "v1";
  doc["columns"] = table.columns;
  auto rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void write_table(std::ostream& out, const Table& table, Format format) {
  if (format == Format::Csv) {
    write_csv(out, table);
  } else {
    write_json(out, table);
  }
}

void write_table(const std::string& path, const Table& table, Format format) {
  if (path.empty() || path == "-") {
    write_table(std::cout, table, format);
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  write_table(f, table, format);
  if (!f) throw Error("write to '" + path + "' failed");
}

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_commas(line);
    if (!have_header) {
      t.columns = std::move(fields);
      have_header = true;
      continue;
    }
    std::vector<Cell> row;
    for (const auto& f : fields) row.push_back(parse_cell(f));
    t.add_row(std::move(row));
  }
  if (!have_header) throw ConfigError("CSV input has no header");
  return t;
}

Table read_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.contains("columns") || !doc.contains("rows")) throw ConfigError("JSON input lacks columns/rows");
  Table t;
  t.columns = doc["columns"].get<std::vector<std::string>>();
  for (const auto& r : doc["rows"]) {
    std::vector<Cell> row;
    for (const auto& c : r) {
      if (c.is_number()) {
        row.emplace_back(c.get<double>());
      } else {
        row.emplace_back(c.get<std::string>());
      }
    }
    t.add_row(std::move(row));
  }
  return t;
}

Table read_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  char first = 0;
  while (f.get(first) && std::isspace(static_cast<unsigned char>(first))) {
  }
  f.clear();
  f.seekg(0);
  return first == '{' ? read_json(f) : read_csv(f);
}

Table ehrenfest_table(const std::vector<EhrenfestPoint>& points) {
  Table t;
  t.columns = {"hbar", "nu_E", "nu_E_inv", "method", "eps_lo", "eps_hi"};
  for (const auto& p : points) {
    t.add_row({p.hbar, p.nu_e, p.inverse(), to_string(p.method), p.eps_lo, p.eps_hi});
  }
  return t;
}

std::vector<EhrenfestPoint> ehrenfest_points(const Table& table) {
  const std::size_t ih = table.column_index("hbar");
  const std::size_t in = table.column_index("nu_E");
  std::vector<EhrenfestPoint> out;
  for (const auto& row : table.rows) {
    EhrenfestPoint p;
    p.hbar = as_double(row[ih], "hbar");
    p.nu_e = as_double(row[in], "nu_E");
    for (const char* name : {"eps_lo", "eps_hi", "method"}) {
      for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (table.columns[i] != name) continue;
        if (std::string(name) == "method") {
          if (const auto* s = std::get_if<std::string>(&row[i])) p.method = parse_method(*s);
        } else {
          (std::string(name) == "eps_lo" ? p.eps_lo : p.eps_hi) = as_double(row[i], name);
        }
      }
    }
    out.push_back(p);
  }
  return out;
}

Table spectrum_table(const SpectralWindow& window) {
  Table t;
  t.columns = {"n", "eps", "parity"};
  for (const auto& s : window.states) {
    t.add_row({static_cast<long long>(s.n), s.energy, std::string(to_string(s.parity))});
  }
  return t;
}

Table overlap_table(const OverlapSet& overlaps) {
  Table t;
  t.columns = {"n", "eps", "weight"};
  for (const auto& e : overlaps.entries) t.add_row({static_cast<long long>(e.n), e.energy, e.weight});
  return t;
}

Table density_table(const std::vector<DensityBin>& bins) {
  Table t;
  t.columns = {"nu", "density"};
  for (const auto& b : bins) t.add_row({b.nu, b.density});
  return t;
}

Table wavefunction_table(const EigenState& state) {
  Table t;
  t.columns = {"q", "phi"};
  const std::size_t count = state.sample_count();
  const auto half = static_cast<std::ptrdiff_t>(state.half_samples.size()) - 1;
  for (std::size_t j = 0; j < count; ++j) {
    const double q = static_cast<double>(static_cast<std::ptrdiff_t>(j) - half) * state.grid.step;
    t.add_row({q, state.sample(j)});
  }
  return t;
}

}  // namespace qbreak::io

#include "blmac/csv.hpp"

#include <fstream>
#include <sstream>

namespace blmac {

namespace {

// Values with CSV metacharacters get RFC 4180 quoting; everything the tool
// emits today is plain, but user-supplied provenance may not be.
std::string escape_field(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string cell_text(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  return escape_field(std::get<std::string>(cell));
}

}  // namespace

std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  for (const auto& [key, value] : table.provenance())
    out << "# " << key << " = " << value << "\n";
  for (std::size_t c = 0; c < table.columns().size(); ++c) {
    if (c) out << ',';
    out << escape_field(table.columns()[c]);
  }
  out << '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << cell_text(row[c]);
    }
    out << '\n';
  }
  return out.str();
}

void write_csv(const ResultTable& table, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw std::runtime_error("write_csv: cannot open '" + path.string() + "' for writing");
  file << to_csv(table);
  if (!file)
    throw std::runtime_error("write_csv: write to '" + path.string() + "' failed");
}

}  // namespace blmac

#ifndef BLMAC_CSV_HPP
#define BLMAC_CSV_HPP

#include <filesystem>
#include <string>

#include "blmac/result_table.hpp"

namespace blmac {

// CSV image of a table: '#'-prefixed provenance lines, a header row, then the
// data rows. Numbers carry 12 significant digits; the output is a pure
// function of the table, so identical tables serialize byte-identically.
std::string to_csv(const ResultTable& table);

// Writes to_csv() to disk. IO failures are reported with the path.
void write_csv(const ResultTable& table, const std::filesystem::path& path);

}  // namespace blmac

#endif

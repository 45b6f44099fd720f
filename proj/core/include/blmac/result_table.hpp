#ifndef BLMAC_RESULT_TABLE_HPP
#define BLMAC_RESULT_TABLE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace blmac {

using Cell = std::variant<std::int64_t, double, std::string>;

// A rectangular result set plus the provenance needed to reproduce it
// (seed, configuration, version). Row order is part of the contract: the
// producers append in canonical sweep order and serialization keeps it.
class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns);

  void add_provenance(std::string key, std::string value);
  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& provenance() const {
    return provenance_;
  }

  std::size_t column_index(std::string_view name) const;  // throws if absent
  bool has_column(std::string_view name) const;

  // Numeric view of a cell; throws if the cell holds text.
  double number_at(std::size_t row, std::size_t column) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> provenance_;
};

// Shortest-round-trip decimal with 12 significant digits, locale-independent.
std::string format_number(double value);

// FNV-1a over a string; used to stamp configuration digests into provenance.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace blmac

#endif

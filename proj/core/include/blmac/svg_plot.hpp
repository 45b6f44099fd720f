#ifndef BLMAC_SVG_PLOT_HPP
#define BLMAC_SVG_PLOT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blmac/result_table.hpp"

namespace blmac {

// Line-plot description over a result table. Each entry of `y_columns` becomes
// one series. When `group_by` is set, the table is additionally split by the
// distinct values of that column and each (y column, group value) pair becomes
// its own series. An optional filter keeps only rows whose `filter->first`
// column renders equal to `filter->second`.
struct PlotSpec {
  std::string x_column;
  std::vector<std::string> y_columns;
  std::optional<std::string> group_by;
  std::optional<std::pair<std::string, std::string>> filter;
  std::string title;
  std::string x_label;
  std::string y_label;
};

// Renders the plot as a standalone SVG document. Rows whose x or y cell is not
// numeric are skipped. Output is a pure function of the inputs. Throws
// std::invalid_argument when a referenced column does not exist.
std::string to_svg(const ResultTable& table, const PlotSpec& spec);

void write_svg(const ResultTable& table, const PlotSpec& spec,
               const std::filesystem::path& path);

}  // namespace blmac

#endif

#include "blmac/result_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace blmac {

ResultTable::ResultTable(std::vector<std::string> columns)
    : columns_(std::move(columns)) {
  if (columns_.empty())
    throw std::invalid_argument("ResultTable: need at least one column");
}

void ResultTable::add_provenance(std::string key, std::string value) {
  provenance_.emplace_back(std::move(key), std::move(value));
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    std::ostringstream msg;
    msg << "ResultTable: row has " << row.size() << " cells, table has "
        << columns_.size() << " columns";
    throw std::invalid_argument(msg.str());
  }
  rows_.push_back(std::move(row));
}

std::size_t ResultTable::column_index(std::string_view name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end())
    throw std::invalid_argument("ResultTable: no column named '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns_.begin());
}

bool ResultTable::has_column(std::string_view name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

double ResultTable::number_at(std::size_t row, std::size_t column) const {
  const Cell& cell = rows_.at(row).at(column);
  if (const auto* i = std::get_if<std::int64_t>(&cell))
    return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  throw std::invalid_argument("ResultTable: cell holds text, not a number");
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 12);
  if (res.ec != std::errc())
    throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

}  // namespace blmac

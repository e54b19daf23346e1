#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xolap/algebra.hpp"

namespace xolap {

enum class Format { Xml, Csv, Json };

std::optional<Format> parse_format(std::string_view text) noexcept;

struct PivotTable {
  std::vector<AxisLayout> row_axes;
  std::vector<AxisLayout> column_axes;
  std::vector<Coordinate> row_headers;     // ordered by member order, ALL last
  std::vector<Coordinate> column_headers;
  std::vector<MeasureColumn> measures;
  // body[r][c] is empty where the cube has no cell.
  std::vector<std::vector<std::optional<std::vector<Decimal>>>> body;
};

// Axes [0, split) become rows, [split, n) columns. Throws InvalidSplit.
PivotTable to_pivot(const CubeView& view, std::size_t split);

std::string serialize(const CubeView& view, Format format);
std::string serialize(const PivotTable& pivot, Format format);

// Set view of a result for equality checks: coordinate (in axis order) to
// measure name to value.
using CellSet = std::map<Coordinate, std::map<std::string, Decimal>>;

CellSet cell_set(const CubeView& view);
// Parses the result/cell/coord/measure shape (native XML serialization or
// external processor output). Throws OutputParseError.
CellSet parse_result_xml(std::string_view xml);

std::string csv_field(std::string_view field);

}  // namespace xolap

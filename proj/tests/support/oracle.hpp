#pragma once

// Flat group-by reference: interprets a pipeline directly over the raw
// document values with exact rational arithmetic. Shares no evaluation
// code with the engine; only the loaded documents are reused.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "xolap/presentation.hpp"
#include "xolap/store.hpp"

namespace oracle {

using Coord = std::vector<std::string>;
using Cells = std::map<Coord, std::map<std::string, std::string>>;

struct Result {
  std::vector<std::string> axes;  // dimension ids / pulled names, in axis order
  Cells cells;
};

Result run(const xolap::WarehouseInstance& instance, const nlohmann::json& pipeline);

// Per-fact coordinate at one level, by a private parent walk.
std::string ancestor(const xolap::WarehouseInstance& instance, const std::string& dimension,
                     const std::string& member, const std::string& level);

// The engine's result in the oracle's shape.
Cells cells_of(const xolap::CellSet& cells);
Cells cells_of(const xolap::CubeView& view);

// First differing entry, or "" when equal.
std::string diff(const Cells& expected, const Cells& actual);

}  // namespace oracle

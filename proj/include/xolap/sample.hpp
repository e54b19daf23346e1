#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "xolap/store.hpp"

namespace xolap {

// A warehouse as document texts keyed by relative path; the metadata
// document is under kModelFileName.
struct WarehouseFiles {
  std::map<std::string, std::string> documents;

  const std::string& model() const { return documents.at(std::string(kModelFileName)); }
  DocumentReader reader() const;
  void write(const std::filesystem::path& dir) const;  // throws std::runtime_error on I/O failure
};

std::string dimension_document(const DimensionSpec& spec, const std::vector<DimensionMember>& members);

struct FactRow {
  std::vector<std::pair<std::string, std::string>> measures;    // name, value text
  std::vector<std::pair<std::string, std::string>> dimensions;  // dimension id, member id
};
std::string fact_document(const FactSpec& spec, const std::vector<FactRow>& rows);

// The fixed desk-scale warehouse: date (day < month < year), product
// (item < category), store (store < city), fact class "sales" with five facts.
WarehouseFiles sample_warehouse();

struct GeneratorConfig {
  std::uint64_t seed = 1;
  std::size_t facts = 100;
  std::size_t dimensions = 3;
  int max_depth = 3;
  bool fixed_depth = false;  // every dimension gets max_depth levels
  std::size_t max_members_per_level = 20;
  double ragged_fraction = 0.0;   // members whose parent skips a level (or is absent)
  double missing_fraction = 0.0;  // facts that omit one dimension reference
  double coarse_ref_fraction = 0.0;  // fact references to a non-leaf member
};

// Pseudo-random warehouse, reproducible per config.
WarehouseFiles random_warehouse(const GeneratorConfig& config);

std::shared_ptr<const WarehouseInstance> load_files(const WarehouseFiles& files,
                                                    const std::filesystem::path& base_dir = ".");

}  // namespace xolap

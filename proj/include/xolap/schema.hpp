#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xolap/error.hpp"

namespace xolap {

enum class ScalarType { String, Integer, Decimal, Date };
enum class AggregateFn { Sum, Count, Min, Max, Avg };

std::string_view to_string(ScalarType t) noexcept;
std::string_view to_string(AggregateFn fn) noexcept;
std::optional<ScalarType> parse_scalar_type(std::string_view text) noexcept;
std::optional<AggregateFn> parse_aggregate_fn(std::string_view text) noexcept;
bool is_numeric(ScalarType t) noexcept;

struct AttributeSpec {
  std::string name;
  ScalarType type = ScalarType::String;
  bool key = false;

  friend bool operator==(const AttributeSpec&, const AttributeSpec&) = default;
};

struct LevelSpec {
  std::string id;
  int depth = 1;  // 1 = finest
  std::vector<AttributeSpec> attributes;

  const AttributeSpec* find_attribute(std::string_view name) const;
  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

struct DimensionSpec {
  std::string id;
  std::string document_path;     // relative, forward slashes
  std::vector<LevelSpec> levels;  // ordered by depth

  const LevelSpec* find_level(std::string_view level_id) const;
  friend bool operator==(const DimensionSpec&, const DimensionSpec&) = default;
};

struct MeasureSpec {
  std::string name;
  ScalarType type = ScalarType::Integer;
  AggregateFn aggregate = AggregateFn::Sum;

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;
};

struct FactSpec {
  std::string id;
  std::string document_path;
  std::vector<MeasureSpec> measures;
  std::vector<std::string> dimension_links;

  const MeasureSpec* find_measure(std::string_view name) const;
  bool links(std::string_view dimension_id) const;
  friend bool operator==(const FactSpec&, const FactSpec&) = default;
};

// Parsed dw-model.xml. Immutable once built; share freely across threads.
struct WarehouseSchema {
  std::vector<DimensionSpec> dimensions;
  std::vector<FactSpec> fact_classes;
  std::filesystem::path source_path;

  const DimensionSpec* find_dimension(std::string_view id) const;
  const FactSpec* find_fact(std::string_view id) const;
  std::filesystem::path base_dir() const { return source_path.parent_path(); }
  std::filesystem::path resolve(std::string_view document_path) const;

  friend bool operator==(const WarehouseSchema&, const WarehouseSchema&) = default;
};

inline constexpr std::string_view kModelFileName = "dw-model.xml";

// Throws MalformedXml or SchemaViolation (message lists every violation,
// one per line, each prefixed by its element path).
WarehouseSchema parse_schema(std::string_view xml_text, const std::filesystem::path& base_dir);

// Collecting variant used by the validator: structural problems go to
// `diagnostics` and the best-effort schema is returned. Invariant checks are
// not run; call validate_schema for those. Throws MalformedXml only.
WarehouseSchema parse_schema_lenient(std::string_view xml_text, const std::filesystem::path& base_dir,
                                     std::vector<Diagnostic>& diagnostics);

std::vector<Diagnostic> validate_schema(const WarehouseSchema& schema);

std::string serialize_schema(const WarehouseSchema& schema);

}  // namespace xolap

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xolap/decimal.hpp"
#include "xolap/error.hpp"
#include "xolap/schema.hpp"
#include "xolap/xml.hpp"

namespace xolap {

// Reserved coordinate values. None of them may be used as a member id.
inline constexpr std::string_view kUnknownMember = "__unknown__";
inline constexpr std::string_view kUnassignedMember = "__unassigned__";
inline constexpr std::string_view kAllMember = "*";

bool is_sentinel(std::string_view member_id) noexcept;

struct ParentRef {
  std::string level_id;
  std::string member_id;

  friend bool operator==(const ParentRef&, const ParentRef&) = default;
};

struct DimensionMember {
  std::string member_id;
  std::string level_id;
  std::map<std::string, std::string> attribute_values;  // type-checked at load
  std::optional<ParentRef> parent;  // may skip intermediate levels

  friend bool operator==(const DimensionMember&, const DimensionMember&) = default;
};

class DimensionTable {
 public:
  DimensionTable() = default;
  explicit DimensionTable(DimensionSpec spec);

  const DimensionSpec& spec() const noexcept { return spec_; }
  const std::string& id() const noexcept { return spec_.id; }

  const DimensionMember* find(std::string_view member_id) const;
  const DimensionMember& member(std::string_view member_id) const;  // throws UnknownMember
  const std::vector<DimensionMember>& members() const noexcept { return members_; }
  // Document order of the members declared at `level_id`; throws UnknownLevel.
  const std::vector<std::string>& members_at(std::string_view level_id) const;
  int depth_of(std::string_view level_id) const;  // throws UnknownLevel

  // Numeric value of an attribute, nullopt when the member does not carry it.
  std::optional<Decimal> numeric_attribute(std::string_view member_id, std::string_view attribute) const;

  void add(DimensionMember member);

  friend bool operator==(const DimensionTable& a, const DimensionTable& b) {
    return a.spec_ == b.spec_ && a.members_ == b.members_;
  }

 private:
  DimensionSpec spec_;
  std::vector<DimensionMember> members_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<std::string, std::vector<std::string>, std::less<>> level_order_;
};

// Walks parent links upward to `target_level`. Returns the member itself at
// its own level, kUnassignedMember when the chain skips the target or stops
// short of it, kUnknownMember for kUnknownMember input.
std::string ancestor_at_level(const DimensionTable& table, std::string_view member_id,
                              std::string_view target_level);

struct FactRecord {
  std::size_t ordinal = 0;
  std::map<std::string, Decimal> measure_values;
  std::map<std::string, std::string> dimension_refs;  // kUnknownMember when absent
  NodeId node = 0;  // the fact element in its document tree

  friend bool operator==(const FactRecord&, const FactRecord&) = default;
};

DimensionTable load_dimension(std::string_view document_text, const DimensionSpec& spec);
std::vector<FactRecord> load_facts(std::string_view document_text, const FactSpec& spec);

// Collecting variants over an already-parsed tree; each defect yields one
// diagnostic and the offending item is skipped.
DimensionTable read_dimension(const DataTree& tree, const DimensionSpec& spec, const std::string& document_path,
                              std::vector<Diagnostic>& diagnostics);
std::vector<FactRecord> read_facts(const DataTree& tree, const FactSpec& spec, const std::string& document_path,
                                   std::vector<Diagnostic>& diagnostics);

// Returns the text of a document named by its path relative to the
// warehouse directory.
using DocumentReader = std::function<std::string(const std::string& document_path)>;

DocumentReader directory_reader(const std::filesystem::path& base_dir);

// Immutable loaded snapshot of the three document kinds.
class WarehouseInstance {
 public:
  struct FactClassData {
    std::shared_ptr<const DataTree> tree;
    std::vector<FactRecord> records;
  };
  struct DimensionData {
    std::shared_ptr<const DataTree> tree;
    DimensionTable table;
  };

  WarehouseInstance(WarehouseSchema schema, std::map<std::string, DimensionData, std::less<>> dimensions,
                    std::map<std::string, FactClassData, std::less<>> facts);

  const WarehouseSchema& schema() const noexcept { return schema_; }
  const DimensionTable& dimension(std::string_view id) const;  // throws UnknownDimension
  const std::vector<FactRecord>& facts(std::string_view fact_class) const;  // throws UnknownFactClass
  const std::shared_ptr<const DataTree>& fact_tree(std::string_view fact_class) const;
  const std::shared_ptr<const DataTree>& dimension_tree(std::string_view id) const;

  friend bool operator==(const WarehouseInstance& a, const WarehouseInstance& b);

 private:
  WarehouseSchema schema_;
  std::map<std::string, DimensionData, std::less<>> dimensions_;
  std::map<std::string, FactClassData, std::less<>> facts_;
};

// Strict loading: any malformed document or load-time integrity error throws.
// Dangling fact references are not checked here; see check_integrity.
std::shared_ptr<const WarehouseInstance> load_instance(const WarehouseSchema& schema, const DocumentReader& reader);
std::shared_ptr<const WarehouseInstance> load_warehouse(const std::filesystem::path& dir);

std::vector<Diagnostic> check_integrity(const WarehouseInstance& instance);

// Full validation of a warehouse directory: schema structure and invariants,
// every document's load-time checks, then referential integrity. Throws
// MalformedXml when dw-model.xml is missing or any document is ill-formed.
std::vector<Diagnostic> validate_warehouse(const std::filesystem::path& dir);
std::vector<Diagnostic> validate_warehouse(std::string_view model_text, const std::filesystem::path& base_dir,
                                           const DocumentReader& reader);

std::string read_file(const std::filesystem::path& path);  // throws MalformedXml if unreadable

}  // namespace xolap

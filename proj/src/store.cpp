#include "xolap/store.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

namespace xolap {

bool is_sentinel(std::string_view member_id) noexcept {
  return member_id == kUnknownMember || member_id == kUnassignedMember || member_id == kAllMember;
}

DimensionTable::DimensionTable(DimensionSpec spec) : spec_(std::move(spec)) {
  for (const auto& level : spec_.levels) level_order_[level.id];
}

const DimensionMember* DimensionTable::find(std::string_view member_id) const {
  auto it = index_.find(std::string(member_id));
  return it == index_.end() ? nullptr : &members_[it->second];
}

const DimensionMember& DimensionTable::member(std::string_view member_id) const {
  if (const auto* m = find(member_id)) return *m;
  throw Error(ErrorCode::UnknownMember,
              "dimension '" + spec_.id + "' has no member '" + std::string(member_id) + "'");
}

const std::vector<std::string>& DimensionTable::members_at(std::string_view level_id) const {
  auto it = level_order_.find(level_id);
  if (it == level_order_.end()) {
    throw Error(ErrorCode::UnknownLevel,
                "dimension '" + spec_.id + "' has no level '" + std::string(level_id) + "'");
  }
  return it->second;
}

int DimensionTable::depth_of(std::string_view level_id) const {
  if (const auto* level = spec_.find_level(level_id)) return level->depth;
  throw Error(ErrorCode::UnknownLevel, "dimension '" + spec_.id + "' has no level '" + std::string(level_id) + "'");
}

std::optional<Decimal> DimensionTable::numeric_attribute(std::string_view member_id,
                                                         std::string_view attribute) const {
  const DimensionMember& m = member(member_id);
  auto it = m.attribute_values.find(std::string(attribute));
  if (it == m.attribute_values.end()) return std::nullopt;
  return Decimal::parse(it->second);
}

void DimensionTable::add(DimensionMember member) {
  index_.emplace(member.member_id, members_.size());
  level_order_[member.level_id].push_back(member.member_id);
  members_.push_back(std::move(member));
}

std::string ancestor_at_level(const DimensionTable& table, std::string_view member_id,
                              std::string_view target_level) {
  const int target_depth = table.depth_of(target_level);
  if (member_id == kUnknownMember) return std::string(kUnknownMember);
  const DimensionMember* current = &table.member(member_id);
  while (true) {
    if (current->level_id == target_level) return current->member_id;
    if (table.depth_of(current->level_id) > target_depth || !current->parent) {
      return std::string(kUnassignedMember);
    }
    current = &table.member(current->parent->member_id);
  }
}

namespace {

bool valid_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  auto number = [&](std::size_t from, std::size_t len) {
    int v = 0;
    for (std::size_t i = from; i < from + len; ++i) v = v * 10 + (s[i] - '0');
    return v;
  };
  const std::chrono::year_month_day ymd{std::chrono::year(number(0, 4)),
                                        std::chrono::month(static_cast<unsigned>(number(5, 2))),
                                        std::chrono::day(static_cast<unsigned>(number(8, 2)))};
  return ymd.ok();
}

bool value_has_type(std::string_view value, ScalarType type) {
  switch (type) {
    case ScalarType::String: return true;
    case ScalarType::Date: return valid_date(value);
    case ScalarType::Integer: {
      auto d = Decimal::parse(value);
      return d && d->is_integer();
    }
    case ScalarType::Decimal: return Decimal::parse(value).has_value();
  }
  return false;
}

std::string squote(std::string_view s) { return "'" + std::string(s) + "'"; }

}  // namespace

DimensionTable read_dimension(const DataTree& tree, const DimensionSpec& spec, const std::string& document_path,
                              std::vector<Diagnostic>& diags) {
  DimensionTable table(spec);
  auto report = [&](NodeId node, std::string message) {
    diags.push_back({document_path + ":" + tree.path(node), std::move(message)});
  };
  const NodeId root = tree.root();
  if (tree.node(root).name != "dimension") {
    report(root, "root element must be dimension");
    return table;
  }
  if (tree.attribute(root, "id").value_or("") != spec.id) {
    report(root, "@id must be " + squote(spec.id));
  }

  struct Pending {
    NodeId node;
    std::string parent_level;
    std::string parent_id;
  };
  std::vector<Pending> parents;

  for (NodeId level_node : tree.child_elements(root)) {
    if (tree.node(level_node).name != "Level") {
      report(level_node, "unknown element " + tree.node(level_node).name);
      continue;
    }
    const std::string level_id(tree.attribute(level_node, "id").value_or(""));
    const LevelSpec* level = spec.find_level(level_id);
    if (level == nullptr) {
      report(level_node, "level " + squote(level_id) + " is not declared for dimension " + squote(spec.id));
      continue;
    }
    for (NodeId inst : tree.child_elements(level_node)) {
      if (tree.node(inst).name != "instance") {
        report(inst, "unknown element " + tree.node(inst).name);
        continue;
      }
      auto id = tree.attribute(inst, "id");
      if (!id || id->empty()) {
        report(inst, "instance without @id");
        continue;
      }
      if (is_sentinel(*id) || id->starts_with("__")) {
        report(inst, "reserved member id " + squote(*id));
        continue;
      }
      if (table.find(*id) != nullptr) {
        report(inst, "duplicate member id " + squote(*id));
        continue;
      }
      // A member with bad content is still registered, so that references
      // to it do not produce follow-on diagnostics.
      DimensionMember member{std::string(*id), level_id, {}, std::nullopt};
      for (NodeId child : tree.child_elements(inst)) {
        const std::string& tag = tree.node(child).name;
        if (tag == "attribute") {
          const std::string name(tree.attribute(child, "name").value_or(""));
          const std::string value(tree.attribute(child, "value").value_or(""));
          const AttributeSpec* attr = level->find_attribute(name);
          if (attr == nullptr) {
            report(child, "attribute " + squote(name) + " is not declared at level " + squote(level_id));
          } else if (member.attribute_values.count(name) != 0) {
            report(child, "duplicate attribute " + squote(name));
          } else if (!value_has_type(value, attr->type)) {
            report(child, "value " + squote(value) + " is not a valid " + std::string(to_string(attr->type)));
          } else {
            member.attribute_values.emplace(name, value);
          }
        } else if (tag == "parent") {
          if (!parents.empty() && parents.back().node == inst) {
            report(child, "instance has more than one parent");
            continue;
          }
          parents.push_back({inst, std::string(tree.attribute(child, "level").value_or("")),
                             std::string(tree.attribute(child, "idref").value_or(""))});
        } else {
          report(child, "unknown element " + tag);
        }
      }
      table.add(std::move(member));
    }
  }

  // Parents may reference members declared later in the document.
  DimensionTable linked(spec);
  std::map<std::string, ParentRef> resolved;
  for (const auto& p : parents) {
    const std::string member_id(tree.attribute(p.node, "id").value_or(""));
    const DimensionMember* child = table.find(member_id);
    const NodeId parent_node = tree.child_elements(p.node, "parent").front();
    const LevelSpec* parent_level = spec.find_level(p.parent_level);
    const DimensionMember* parent = table.find(p.parent_id);
    if (parent == nullptr) {
      report(parent_node, "parent references unknown member " + squote(p.parent_id));
    } else if (parent_level == nullptr || parent->level_id != p.parent_level) {
      report(parent_node, "parent member " + squote(p.parent_id) + " is not at level " + squote(p.parent_level));
    } else if (parent_level->depth <= spec.find_level(child->level_id)->depth) {
      report(parent_node, "parent level " + squote(p.parent_level) + " is not coarser than " +
                              squote(child->level_id));
    } else {
      resolved.emplace(member_id, ParentRef{p.parent_level, p.parent_id});
    }
  }
  for (DimensionMember m : table.members()) {
    if (auto it = resolved.find(m.member_id); it != resolved.end()) m.parent = it->second;
    linked.add(std::move(m));
  }
  return linked;
}

std::vector<FactRecord> read_facts(const DataTree& tree, const FactSpec& spec, const std::string& document_path,
                                   std::vector<Diagnostic>& diags) {
  std::vector<FactRecord> records;
  auto report = [&](NodeId node, std::string message) {
    diags.push_back({document_path + ":" + tree.path(node), std::move(message)});
  };
  const NodeId root = tree.root();
  if (tree.node(root).name != "FactDoc") {
    report(root, "root element must be FactDoc");
    return records;
  }
  if (tree.attribute(root, "id").value_or("") != spec.id) report(root, "@id must be " + squote(spec.id));

  std::size_t ordinal = 0;
  for (NodeId fact_node : tree.child_elements(root)) {
    if (tree.node(fact_node).name != "fact") {
      report(fact_node, "unknown element " + tree.node(fact_node).name);
      continue;
    }
    const std::string where = "fact ordinal " + std::to_string(ordinal);
    FactRecord record;
    record.ordinal = ordinal++;
    record.node = fact_node;
    bool ok = true;
    for (NodeId child : tree.child_elements(fact_node)) {
      const std::string& tag = tree.node(child).name;
      if (tag == "measure") {
        const std::string name(tree.attribute(child, "name").value_or(""));
        const std::string value(tree.attribute(child, "value").value_or(""));
        const MeasureSpec* m = spec.find_measure(name);
        if (m == nullptr) {
          report(child, where + ": unknown measure " + squote(name));
          ok = false;
          continue;
        }
        if (record.measure_values.count(name) != 0) {
          report(child, where + ": duplicate measure " + squote(name));
          ok = false;
          continue;
        }
        auto parsed = Decimal::parse(value);
        if (!parsed || (m->type == ScalarType::Integer && !parsed->is_integer())) {
          report(child, where + ": measure " + squote(name) + " value " + squote(value) + " is not a valid " +
                            std::string(to_string(m->type)));
          ok = false;
          continue;
        }
        record.measure_values.emplace(name, *parsed);
      } else if (tag == "dimension") {
        const std::string dim(tree.attribute(child, "idref").value_or(""));
        const std::string member(tree.attribute(child, "value-id").value_or(""));
        if (!spec.links(dim)) {
          report(child, where + ": dimension " + squote(dim) + " is not linked by fact class " + squote(spec.id));
          ok = false;
        } else if (record.dimension_refs.count(dim) != 0) {
          report(child, where + ": duplicate dimension idref " + squote(dim));
          ok = false;
        } else if (member.empty()) {
          report(child, where + ": dimension reference without @value-id");
          ok = false;
        } else {
          record.dimension_refs.emplace(dim, member);
        }
      } else {
        report(child, where + ": unknown element " + tag);
        ok = false;
      }
    }
    for (const auto& m : spec.measures) {
      if (ok && record.measure_values.count(m.name) == 0) {
        report(fact_node, where + ": missing measure " + squote(m.name));
        ok = false;
      }
    }
    if (!ok) continue;
    for (const auto& dim : spec.dimension_links) {
      record.dimension_refs.try_emplace(dim, std::string(kUnknownMember));
    }
    records.push_back(std::move(record));
  }
  return records;
}

namespace {

[[noreturn]] void throw_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string message;
  for (const auto& d : diags) message += (message.empty() ? "" : "\n") + d.str();
  throw Error(ErrorCode::IntegrityError, message);
}

}  // namespace

DimensionTable load_dimension(std::string_view document_text, const DimensionSpec& spec) {
  const DataTree tree = parse_xml(document_text);
  std::vector<Diagnostic> diags;
  DimensionTable table = read_dimension(tree, spec, spec.document_path, diags);
  if (!diags.empty()) throw_diagnostics(diags);
  return table;
}

std::vector<FactRecord> load_facts(std::string_view document_text, const FactSpec& spec) {
  const DataTree tree = parse_xml(document_text);
  std::vector<Diagnostic> diags;
  auto records = read_facts(tree, spec, spec.document_path, diags);
  if (!diags.empty()) throw_diagnostics(diags);
  return records;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MalformedXml, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

DocumentReader directory_reader(const std::filesystem::path& base_dir) {
  return [base_dir](const std::string& document_path) { return read_file(base_dir / document_path); };
}

WarehouseInstance::WarehouseInstance(WarehouseSchema schema, std::map<std::string, DimensionData, std::less<>> dimensions,
                                     std::map<std::string, FactClassData, std::less<>> facts)
    : schema_(std::move(schema)), dimensions_(std::move(dimensions)), facts_(std::move(facts)) {}

const DimensionTable& WarehouseInstance::dimension(std::string_view id) const {
  auto it = dimensions_.find(id);
  if (it == dimensions_.end()) throw Error(ErrorCode::UnknownDimension, "unknown dimension '" + std::string(id) + "'");
  return it->second.table;
}

const std::vector<FactRecord>& WarehouseInstance::facts(std::string_view fact_class) const {
  auto it = facts_.find(fact_class);
  if (it == facts_.end()) {
    throw Error(ErrorCode::UnknownFactClass, "unknown fact class '" + std::string(fact_class) + "'");
  }
  return it->second.records;
}

const std::shared_ptr<const DataTree>& WarehouseInstance::fact_tree(std::string_view fact_class) const {
  auto it = facts_.find(fact_class);
  if (it == facts_.end()) {
    throw Error(ErrorCode::UnknownFactClass, "unknown fact class '" + std::string(fact_class) + "'");
  }
  return it->second.tree;
}

const std::shared_ptr<const DataTree>& WarehouseInstance::dimension_tree(std::string_view id) const {
  auto it = dimensions_.find(id);
  if (it == dimensions_.end()) throw Error(ErrorCode::UnknownDimension, "unknown dimension '" + std::string(id) + "'");
  return it->second.tree;
}

bool operator==(const WarehouseInstance& a, const WarehouseInstance& b) {
  if (!(a.schema_ == b.schema_) || a.dimensions_.size() != b.dimensions_.size() || a.facts_.size() != b.facts_.size()) {
    return false;
  }
  for (const auto& [id, d] : a.dimensions_) {
    auto it = b.dimensions_.find(id);
    if (it == b.dimensions_.end() || !(it->second.table == d.table)) return false;
  }
  for (const auto& [id, f] : a.facts_) {
    auto it = b.facts_.find(id);
    if (it == b.facts_.end() || it->second.records != f.records) return false;
  }
  return true;
}

std::shared_ptr<const WarehouseInstance> load_instance(const WarehouseSchema& schema, const DocumentReader& reader) {
  std::map<std::string, WarehouseInstance::DimensionData, std::less<>> dims;
  for (const auto& spec : schema.dimensions) {
    auto tree = parse_xml_shared(reader(spec.document_path));
    std::vector<Diagnostic> diags;
    DimensionTable table = read_dimension(*tree, spec, spec.document_path, diags);
    if (!diags.empty()) throw_diagnostics(diags);
    dims.emplace(spec.id, WarehouseInstance::DimensionData{std::move(tree), std::move(table)});
  }
  std::map<std::string, WarehouseInstance::FactClassData, std::less<>> facts;
  for (const auto& spec : schema.fact_classes) {
    auto tree = parse_xml_shared(reader(spec.document_path));
    std::vector<Diagnostic> diags;
    auto records = read_facts(*tree, spec, spec.document_path, diags);
    if (!diags.empty()) throw_diagnostics(diags);
    facts.emplace(spec.id, WarehouseInstance::FactClassData{std::move(tree), std::move(records)});
  }
  return std::make_shared<const WarehouseInstance>(schema, std::move(dims), std::move(facts));
}

std::shared_ptr<const WarehouseInstance> load_warehouse(const std::filesystem::path& dir) {
  const WarehouseSchema schema = parse_schema(read_file(dir / std::string(kModelFileName)), dir);
  return load_instance(schema, directory_reader(dir));
}

std::vector<Diagnostic> check_integrity(const WarehouseInstance& instance) {
  std::vector<Diagnostic> out;
  std::vector<const FactSpec*> specs;
  for (const auto& f : instance.schema().fact_classes) specs.push_back(&f);
  std::sort(specs.begin(), specs.end(), [](const FactSpec* a, const FactSpec* b) { return a->id < b->id; });
  for (const FactSpec* spec : specs) {
    const auto& tree = *instance.fact_tree(spec->id);
    for (const FactRecord& fact : instance.facts(spec->id)) {
      for (const auto& [dim, member] : fact.dimension_refs) {
        if (member == kUnknownMember) continue;
        if (instance.dimension(dim).find(member) != nullptr) continue;
        out.push_back({spec->document_path + ":" + tree.path(fact.node) + "/dimension[@idref='" + dim + "']",
                       "fact class '" + spec->id + "', ordinal " + std::to_string(fact.ordinal) + ", dimension '" +
                           dim + "': unresolved member '" + member + "'"});
      }
    }
  }
  return out;
}

std::vector<Diagnostic> validate_warehouse(std::string_view model_text, const std::filesystem::path& base_dir,
                                           const DocumentReader& reader) {
  std::vector<Diagnostic> diags;
  WarehouseSchema schema = parse_schema_lenient(model_text, base_dir, diags);
  if (diags.empty()) diags = validate_schema(schema);
  if (!diags.empty()) return diags;

  auto fetch = [&](const std::string& path) -> std::optional<std::string> {
    try {
      return reader(path);
    } catch (const Error& e) {
      diags.push_back({"/DW-model", "cannot read document '" + path + "'"});
      return std::nullopt;
    }
  };

  std::map<std::string, WarehouseInstance::DimensionData, std::less<>> dims;
  for (const auto& spec : schema.dimensions) {
    auto text = fetch(spec.document_path);
    if (!text) continue;
    auto tree = parse_xml_shared(*text);
    DimensionTable table = read_dimension(*tree, spec, spec.document_path, diags);
    dims.emplace(spec.id, WarehouseInstance::DimensionData{std::move(tree), std::move(table)});
  }
  std::map<std::string, WarehouseInstance::FactClassData, std::less<>> facts;
  for (const auto& spec : schema.fact_classes) {
    auto text = fetch(spec.document_path);
    if (!text) continue;
    auto tree = parse_xml_shared(*text);
    auto records = read_facts(*tree, spec, spec.document_path, diags);
    facts.emplace(spec.id, WarehouseInstance::FactClassData{std::move(tree), std::move(records)});
  }
  if (dims.size() != schema.dimensions.size() || facts.size() != schema.fact_classes.size()) return diags;
  const WarehouseInstance instance(std::move(schema), std::move(dims), std::move(facts));
  for (auto& d : check_integrity(instance)) diags.push_back(std::move(d));
  return diags;
}

std::vector<Diagnostic> validate_warehouse(const std::filesystem::path& dir) {
  return validate_warehouse(read_file(dir / std::string(kModelFileName)), dir, directory_reader(dir));
}

}  // namespace xolap

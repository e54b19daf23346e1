#include "xolap/schema.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "xolap/xml.hpp"

namespace xolap {

std::string_view to_string(ScalarType t) noexcept {
  switch (t) {
    case ScalarType::String: return "string";
    case ScalarType::Integer: return "integer";
    case ScalarType::Decimal: return "decimal";
    case ScalarType::Date: return "date";
  }
  return "string";
}

std::string_view to_string(AggregateFn fn) noexcept {
  switch (fn) {
    case AggregateFn::Sum: return "sum";
    case AggregateFn::Count: return "count";
    case AggregateFn::Min: return "min";
    case AggregateFn::Max: return "max";
    case AggregateFn::Avg: return "avg";
  }
  return "sum";
}

std::optional<ScalarType> parse_scalar_type(std::string_view text) noexcept {
  if (text == "string") return ScalarType::String;
  if (text == "integer") return ScalarType::Integer;
  if (text == "decimal") return ScalarType::Decimal;
  if (text == "date") return ScalarType::Date;
  return std::nullopt;
}

std::optional<AggregateFn> parse_aggregate_fn(std::string_view text) noexcept {
  if (text == "sum") return AggregateFn::Sum;
  if (text == "count") return AggregateFn::Count;
  if (text == "min") return AggregateFn::Min;
  if (text == "max") return AggregateFn::Max;
  if (text == "avg") return AggregateFn::Avg;
  return std::nullopt;
}

bool is_numeric(ScalarType t) noexcept { return t == ScalarType::Integer || t == ScalarType::Decimal; }

const AttributeSpec* LevelSpec::find_attribute(std::string_view name) const {
  auto it = std::find_if(attributes.begin(), attributes.end(), [&](const auto& a) { return a.name == name; });
  return it == attributes.end() ? nullptr : &*it;
}

const LevelSpec* DimensionSpec::find_level(std::string_view level_id) const {
  auto it = std::find_if(levels.begin(), levels.end(), [&](const auto& l) { return l.id == level_id; });
  return it == levels.end() ? nullptr : &*it;
}

const MeasureSpec* FactSpec::find_measure(std::string_view name) const {
  auto it = std::find_if(measures.begin(), measures.end(), [&](const auto& m) { return m.name == name; });
  return it == measures.end() ? nullptr : &*it;
}

bool FactSpec::links(std::string_view dimension_id) const {
  return std::find(dimension_links.begin(), dimension_links.end(), dimension_id) != dimension_links.end();
}

const DimensionSpec* WarehouseSchema::find_dimension(std::string_view id) const {
  auto it = std::find_if(dimensions.begin(), dimensions.end(), [&](const auto& d) { return d.id == id; });
  return it == dimensions.end() ? nullptr : &*it;
}

const FactSpec* WarehouseSchema::find_fact(std::string_view id) const {
  auto it = std::find_if(fact_classes.begin(), fact_classes.end(), [&](const auto& f) { return f.id == id; });
  return it == fact_classes.end() ? nullptr : &*it;
}

std::filesystem::path WarehouseSchema::resolve(std::string_view document_path) const {
  return base_dir() / std::filesystem::path(std::string(document_path));
}

namespace {

class SchemaReader {
 public:
  SchemaReader(const DataTree& tree, std::vector<Diagnostic>& diags) : tree_(tree), diags_(diags) {}

  WarehouseSchema read() {
    WarehouseSchema schema;
    const NodeId root = tree_.root();
    if (tree_.node(root).name != "DW-model") {
      report(root, "root element must be DW-model, found " + tree_.node(root).name);
      return schema;
    }
    for (NodeId child : tree_.child_elements(root)) {
      const std::string& tag = tree_.node(child).name;
      if (tag == "dimension") {
        schema.dimensions.push_back(read_dimension(child));
      } else if (tag == "FactDoc") {
        schema.fact_classes.push_back(read_fact(child));
      } else {
        report(child, "unknown element " + tag);
      }
    }
    return schema;
  }

 private:
  void report(NodeId node, std::string message) { diags_.push_back({tree_.path(node), std::move(message)}); }

  std::string required(NodeId node, std::string_view name) {
    if (auto v = tree_.attribute(node, name)) return std::string(*v);
    report(node, "missing required attribute @" + std::string(name));
    return {};
  }

  DimensionSpec read_dimension(NodeId node) {
    DimensionSpec dim;
    dim.id = required(node, "id");
    dim.document_path = required(node, "path");
    for (NodeId child : tree_.child_elements(node)) {
      if (tree_.node(child).name != "Level") {
        report(child, "unknown element " + tree_.node(child).name);
        continue;
      }
      dim.levels.push_back(read_level(child));
    }
    std::stable_sort(dim.levels.begin(), dim.levels.end(),
                     [](const LevelSpec& a, const LevelSpec& b) { return a.depth < b.depth; });
    return dim;
  }

  LevelSpec read_level(NodeId node) {
    LevelSpec level;
    level.id = required(node, "id");
    const std::string depth = required(node, "depth");
    if (!depth.empty()) {
      int value = 0;
      auto [ptr, ec] = std::from_chars(depth.data(), depth.data() + depth.size(), value);
      if (ec != std::errc{} || ptr != depth.data() + depth.size() || value < 1) {
        report(node, "@depth must be a positive integer, got '" + depth + "'");
      } else {
        level.depth = value;
      }
    }
    for (NodeId child : tree_.child_elements(node)) {
      if (tree_.node(child).name != "attribute") {
        report(child, "unknown element " + tree_.node(child).name);
        continue;
      }
      AttributeSpec attr;
      attr.name = required(child, "name");
      const std::string type = required(child, "type");
      if (!type.empty()) {
        if (auto t = parse_scalar_type(type)) {
          attr.type = *t;
        } else {
          report(child, "unknown attribute type '" + type + "'");
        }
      }
      if (auto key = tree_.attribute(child, "key")) {
        if (*key == "true") {
          attr.key = true;
        } else if (*key != "false") {
          report(child, "@key must be true or false");
        }
      }
      level.attributes.push_back(std::move(attr));
    }
    return level;
  }

  FactSpec read_fact(NodeId node) {
    FactSpec fact;
    fact.id = required(node, "id");
    fact.document_path = required(node, "path");
    for (NodeId child : tree_.child_elements(node)) {
      const std::string& tag = tree_.node(child).name;
      if (tag == "measure") {
        MeasureSpec m;
        m.name = required(child, "name");
        const std::string type = required(child, "type");
        if (!type.empty()) {
          auto t = parse_scalar_type(type);
          if (t && is_numeric(*t)) {
            m.type = *t;
          } else {
            report(child, "measure type must be integer or decimal, got '" + type + "'");
          }
        }
        if (auto agg = tree_.attribute(child, "aggregate")) {
          if (auto fn = parse_aggregate_fn(*agg)) {
            m.aggregate = *fn;
          } else {
            report(child, "unknown aggregate '" + std::string(*agg) + "'");
          }
        }
        fact.measures.push_back(std::move(m));
      } else if (tag == "dimension") {
        fact.dimension_links.push_back(required(child, "idref"));
      } else {
        report(child, "unknown element " + tag);
      }
    }
    return fact;
  }

  const DataTree& tree_;
  std::vector<Diagnostic>& diags_;
};

std::string dim_path(const DimensionSpec& d) { return "/DW-model/dimension[@id='" + d.id + "']"; }
std::string fact_path(const FactSpec& f) { return "/DW-model/FactDoc[@id='" + f.id + "']"; }

std::string join_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    if (!out.empty()) out += "\n";
    out += d.str();
  }
  return out;
}

}  // namespace

WarehouseSchema parse_schema_lenient(std::string_view xml_text, const std::filesystem::path& base_dir,
                                     std::vector<Diagnostic>& diagnostics) {
  const DataTree tree = parse_xml(xml_text);
  WarehouseSchema schema = SchemaReader(tree, diagnostics).read();
  schema.source_path = base_dir / std::string(kModelFileName);
  return schema;
}

WarehouseSchema parse_schema(std::string_view xml_text, const std::filesystem::path& base_dir) {
  std::vector<Diagnostic> diags;
  WarehouseSchema schema = parse_schema_lenient(xml_text, base_dir, diags);
  if (diags.empty()) diags = validate_schema(schema);
  if (!diags.empty()) throw Error(ErrorCode::SchemaViolation, join_diagnostics(diags));
  return schema;
}

std::vector<Diagnostic> validate_schema(const WarehouseSchema& schema) {
  std::vector<Diagnostic> out;
  if (schema.dimensions.empty()) out.push_back({"/DW-model", "at least one dimension is required"});
  if (schema.fact_classes.empty()) out.push_back({"/DW-model", "at least one FactDoc is required"});

  std::set<std::string> dim_ids;
  for (const auto& dim : schema.dimensions) {
    if (!dim_ids.insert(dim.id).second) out.push_back({dim_path(dim), "duplicate dimension id '" + dim.id + "'"});
    if (dim.levels.empty()) {
      out.push_back({dim_path(dim), "dimension declares no Level"});
      continue;
    }
    std::set<std::string> level_ids;
    std::vector<int> depths;
    for (const auto& level : dim.levels) {
      const std::string lpath = dim_path(dim) + "/Level[@id='" + level.id + "']";
      if (!level_ids.insert(level.id).second) out.push_back({lpath, "duplicate level id '" + level.id + "'"});
      depths.push_back(level.depth);
      std::set<std::string> names;
      int keys = 0;
      for (const auto& attr : level.attributes) {
        if (!names.insert(attr.name).second) {
          out.push_back({lpath + "/attribute[@name='" + attr.name + "']", "duplicate attribute name"});
        }
        keys += attr.key ? 1 : 0;
      }
      if (!level.attributes.empty() && keys != 1) {
        out.push_back({lpath, "exactly one key attribute required, found " + std::to_string(keys)});
      }
    }
    std::sort(depths.begin(), depths.end());
    for (std::size_t i = 0; i < depths.size(); ++i) {
      if (depths[i] != static_cast<int>(i) + 1) {
        out.push_back({dim_path(dim), "non-contiguous depths"});
        break;
      }
    }
  }

  std::set<std::string> fact_ids;
  for (const auto& fact : schema.fact_classes) {
    if (!fact_ids.insert(fact.id).second) out.push_back({fact_path(fact), "duplicate FactDoc id '" + fact.id + "'"});
    std::set<std::string> names;
    for (const auto& m : fact.measures) {
      const std::string mpath = fact_path(fact) + "/measure[@name='" + m.name + "']";
      if (!names.insert(m.name).second) {
        out.push_back({mpath, "duplicate measure name '" + m.name + "' in fact class '" + fact.id + "'"});
      }
      if (!is_numeric(m.type)) out.push_back({mpath, "measure type must be integer or decimal"});
    }
    if (fact.dimension_links.empty()) out.push_back({fact_path(fact), "FactDoc references no dimension"});
    std::set<std::string> links;
    for (const auto& link : fact.dimension_links) {
      const std::string lpath = fact_path(fact) + "/dimension[@idref='" + link + "']";
      if (!links.insert(link).second) {
        out.push_back({lpath, "duplicate dimension reference"});
      } else if (schema.find_dimension(link) == nullptr) {
        out.push_back({lpath, "dangling dimension idref '" + link + "'"});
      }
    }
  }
  return out;
}

std::string serialize_schema(const WarehouseSchema& schema) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<DW-model>\n";
  for (const auto& dim : schema.dimensions) {
    out += "  <dimension id=\"" + xml_escape(dim.id) + "\" path=\"" + xml_escape(dim.document_path) + "\">\n";
    for (const auto& level : dim.levels) {
      out += "    <Level id=\"" + xml_escape(level.id) + "\" depth=\"" + std::to_string(level.depth) + "\"";
      if (level.attributes.empty()) {
        out += "/>\n";
        continue;
      }
      out += ">\n";
      for (const auto& attr : level.attributes) {
        out += "      <attribute name=\"" + xml_escape(attr.name) + "\" type=\"" + std::string(to_string(attr.type)) +
               "\" key=\"" + (attr.key ? "true" : "false") + "\"/>\n";
      }
      out += "    </Level>\n";
    }
    out += "  </dimension>\n";
  }
  for (const auto& fact : schema.fact_classes) {
    out += "  <FactDoc id=\"" + xml_escape(fact.id) + "\" path=\"" + xml_escape(fact.document_path) + "\">\n";
    for (const auto& m : fact.measures) {
      out += "    <measure name=\"" + xml_escape(m.name) + "\" type=\"" + std::string(to_string(m.type)) +
             "\" aggregate=\"" + std::string(to_string(m.aggregate)) + "\"/>\n";
    }
    for (const auto& link : fact.dimension_links) out += "    <dimension idref=\"" + xml_escape(link) + "\"/>\n";
    out += "  </FactDoc>\n";
  }
  out += "</DW-model>\n";
  return out;
}

}  // namespace xolap

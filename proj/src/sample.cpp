#include "xolap/sample.hpp"

#include <fstream>
#include <random>
#include <stdexcept>

namespace xolap {

DocumentReader WarehouseFiles::reader() const {
  return [docs = documents](const std::string& path) {
    auto it = docs.find(path);
    if (it == docs.end()) throw Error(ErrorCode::MalformedXml, "cannot read " + path);
    return it->second;
  };
}

void WarehouseFiles::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& [path, text] : documents) {
    const auto target = dir / path;
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + target.string());
  }
}

std::string dimension_document(const DimensionSpec& spec, const std::vector<DimensionMember>& members) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<dimension id=\"" + xml_escape(spec.id) + "\">\n";
  for (const auto& level : spec.levels) {
    out += "  <Level id=\"" + xml_escape(level.id) + "\">\n";
    for (const auto& m : members) {
      if (m.level_id != level.id) continue;
      out += "    <instance id=\"" + xml_escape(m.member_id) + "\">\n";
      // Attribute declaration order, not map order.
      for (const auto& attr : level.attributes) {
        auto it = m.attribute_values.find(attr.name);
        if (it == m.attribute_values.end()) continue;
        out += "      <attribute name=\"" + xml_escape(attr.name) + "\" value=\"" + xml_escape(it->second) + "\"/>\n";
      }
      if (m.parent) {
        out += "      <parent level=\"" + xml_escape(m.parent->level_id) + "\" idref=\"" +
               xml_escape(m.parent->member_id) + "\"/>\n";
      }
      out += "    </instance>\n";
    }
    out += "  </Level>\n";
  }
  return out + "</dimension>\n";
}

std::string fact_document(const FactSpec& spec, const std::vector<FactRow>& rows) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<FactDoc id=\"" + xml_escape(spec.id) + "\">\n";
  for (const auto& row : rows) {
    out += "  <fact>\n";
    for (const auto& [name, value] : row.measures) {
      out += "    <measure name=\"" + xml_escape(name) + "\" value=\"" + xml_escape(value) + "\"/>\n";
    }
    for (const auto& [dim, member] : row.dimensions) {
      out += "    <dimension idref=\"" + xml_escape(dim) + "\" value-id=\"" + xml_escape(member) + "\"/>\n";
    }
    out += "  </fact>\n";
  }
  return out + "</FactDoc>\n";
}

namespace {

DimensionMember member(std::string id, std::string level, std::map<std::string, std::string> attrs,
                       std::optional<ParentRef> parent = std::nullopt) {
  return DimensionMember{std::move(id), std::move(level), std::move(attrs), std::move(parent)};
}

ParentRef up(std::string level, std::string id) { return ParentRef{std::move(level), std::move(id)}; }

WarehouseFiles assemble(const WarehouseSchema& schema, const std::map<std::string, std::vector<DimensionMember>>& members,
                        const std::map<std::string, std::vector<FactRow>>& facts) {
  WarehouseFiles files;
  files.documents[std::string(kModelFileName)] = serialize_schema(schema);
  for (const auto& d : schema.dimensions) files.documents[d.document_path] = dimension_document(d, members.at(d.id));
  for (const auto& f : schema.fact_classes) files.documents[f.document_path] = fact_document(f, facts.at(f.id));
  return files;
}

}  // namespace

WarehouseFiles sample_warehouse() {
  using T = ScalarType;
  WarehouseSchema schema;
  schema.dimensions = {
      DimensionSpec{"date", "dimension_date.xml",
                    {LevelSpec{"day", 1, {{"date", T::Date, true}, {"day_num", T::Integer, false}}},
                     LevelSpec{"month", 2, {{"label", T::String, true}}},
                     LevelSpec{"year", 3, {{"label", T::String, true}}}}},
      DimensionSpec{"product", "dimension_product.xml",
                    {LevelSpec{"item", 1, {{"name", T::String, true}, {"unit_weight", T::Integer, false}}},
                     LevelSpec{"category", 2, {{"name", T::String, true}}}}},
      DimensionSpec{"store", "dimension_store.xml",
                    {LevelSpec{"store", 1, {{"name", T::String, true}}},
                     LevelSpec{"city", 2, {{"name", T::String, true}}}}},
  };
  schema.fact_classes = {FactSpec{"sales", "facts.xml", {MeasureSpec{"amount", T::Integer, AggregateFn::Sum}},
                                  {"date", "product", "store"}}};

  std::map<std::string, std::vector<DimensionMember>> members;
  members["date"] = {
      member("d1", "day", {{"date", "2007-01-01"}, {"day_num", "1"}}, up("month", "Jan")),
      member("d2", "day", {{"date", "2007-01-02"}, {"day_num", "2"}}, up("month", "Jan")),
      member("d3", "day", {{"date", "2007-02-01"}, {"day_num", "1"}}, up("month", "Feb")),
      member("d4", "day", {{"date", "2007-02-02"}, {"day_num", "2"}}, up("month", "Feb")),
      member("Jan", "month", {{"label", "January 2007"}}, up("year", "2007")),
      member("Feb", "month", {{"label", "February 2007"}}, up("year", "2007")),
      member("2007", "year", {{"label", "2007"}}),
  };
  members["product"] = {
      member("p1", "item", {{"name", "Widget"}, {"unit_weight", "1"}}, up("category", "catA")),
      member("p2", "item", {{"name", "Gadget"}, {"unit_weight", "1"}}, up("category", "catA")),
      member("p3", "item", {{"name", "Gizmo"}, {"unit_weight", "1"}}, up("category", "catB")),
      member("catA", "category", {{"name", "Category A"}}),
      member("catB", "category", {{"name", "Category B"}}),
  };
  members["store"] = {
      member("s1", "store", {{"name", "North"}}, up("city", "lyon")),
      member("s2", "store", {{"name", "South"}}, up("city", "lyon")),
      member("lyon", "city", {{"name", "Lyon"}}),
  };

  auto row = [](const char* day, const char* item, const char* store, const char* amount) {
    return FactRow{{{"amount", amount}}, {{"date", day}, {"product", item}, {"store", store}}};
  };
  std::map<std::string, std::vector<FactRow>> facts;
  facts["sales"] = {row("d1", "p1", "s1", "10"), row("d1", "p2", "s1", "20"), row("d2", "p1", "s2", "30"),
                    row("d3", "p3", "s1", "40"), row("d4", "p2", "s2", "50")};
  return assemble(schema, members, facts);
}

namespace {

// Portable draws on top of mt19937_64 (whose output sequence is fixed by
// the standard, unlike the library distributions).
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

WarehouseFiles random_warehouse(const GeneratorConfig& config) {
  using T = ScalarType;
  Draw draw(config.seed);
  WarehouseSchema schema;
  std::map<std::string, std::vector<DimensionMember>> members;
  std::map<std::string, std::vector<std::vector<std::string>>> by_level;  // dim -> depth-1 -> ids

  const std::size_t max_members = std::max<std::size_t>(config.max_members_per_level, 2);
  for (std::size_t d = 0; d < config.dimensions; ++d) {
    const std::string dim_id = "dim" + std::to_string(d);
    const int depth = config.fixed_depth ? config.max_depth : 1 + static_cast<int>(draw.below(config.max_depth));
    DimensionSpec spec{dim_id, "dimension_" + dim_id + ".xml", {}};
    for (int l = 1; l <= depth; ++l) {
      LevelSpec level{"l" + std::to_string(l), l, {{"name", T::String, true}, {"weight", T::Integer, false}}};
      if (l == 1) level.attributes.push_back({"price", T::Decimal, false});
      spec.levels.push_back(std::move(level));
    }
    // Coarser levels hold fewer members.
    std::vector<std::size_t> counts(static_cast<std::size_t>(depth));
    for (int l = depth; l >= 1; --l) {
      const std::size_t cap = std::max<std::size_t>(1, max_members >> static_cast<unsigned>(l - 1));
      counts[static_cast<std::size_t>(l - 1)] = draw.between(std::min<std::size_t>(2, cap), cap);
    }
    auto& ids = by_level[dim_id];
    ids.resize(static_cast<std::size_t>(depth));
    for (int l = 1; l <= depth; ++l) {
      for (std::size_t i = 0; i < counts[static_cast<std::size_t>(l - 1)]; ++i) {
        ids[static_cast<std::size_t>(l - 1)].push_back(dim_id + "l" + std::to_string(l) + "m" + std::to_string(i));
      }
    }
    auto& list = members[dim_id];
    for (int l = 1; l <= depth; ++l) {
      const auto li = static_cast<std::size_t>(l - 1);
      for (const auto& id : ids[li]) {
        DimensionMember m{id, "l" + std::to_string(l), {{"name", "member " + id}}, std::nullopt};
        if (!draw.chance(0.05)) m.attribute_values["weight"] = std::to_string(draw.below(10));
        if (l == 1) {
          m.attribute_values["price"] = std::to_string(draw.between(1, 99)) + "." + std::to_string(draw.below(10)) +
                                        std::to_string(draw.below(10));
        }
        if (l < depth) {
          int parent_level = l + 1;
          bool orphan = false;
          if (draw.chance(config.ragged_fraction)) {
            if (l + 2 <= depth) {
              parent_level = l + 2;
            } else {
              orphan = true;
            }
          }
          if (!orphan) {
            const auto& candidates = ids[static_cast<std::size_t>(parent_level - 1)];
            m.parent = ParentRef{"l" + std::to_string(parent_level), candidates[draw.below(candidates.size())]};
          }
        }
        list.push_back(std::move(m));
      }
    }
    schema.dimensions.push_back(std::move(spec));
  }

  FactSpec fact{"sales", "facts.xml",
                {MeasureSpec{"amount", T::Integer, AggregateFn::Sum}, MeasureSpec{"price", T::Decimal, AggregateFn::Avg},
                 MeasureSpec{"qty", T::Integer, AggregateFn::Min}},
                {}};
  for (const auto& d : schema.dimensions) fact.dimension_links.push_back(d.id);
  schema.fact_classes.push_back(fact);

  std::vector<FactRow> rows;
  rows.reserve(config.facts);
  for (std::size_t i = 0; i < config.facts; ++i) {
    FactRow row;
    row.measures = {{"amount", std::to_string(draw.between(1, 100))},
                    {"price", std::to_string(draw.between(0, 49)) + "." + std::to_string(draw.below(100) / 10) +
                                  std::to_string(draw.below(10))},
                    {"qty", std::to_string(draw.between(1, 5))}};
    // A fact with a missing reference omits exactly one of its dimensions.
    const std::size_t omitted =
        draw.chance(config.missing_fraction) ? draw.below(schema.dimensions.size()) : schema.dimensions.size();
    for (std::size_t k = 0; k < schema.dimensions.size(); ++k) {
      const auto& d = schema.dimensions[k];
      const auto& levels = by_level[d.id];
      if (k == omitted) continue;
      const auto& pool = (levels.size() > 1 && draw.chance(config.coarse_ref_fraction)) ? levels[1] : levels[0];
      row.dimensions.emplace_back(d.id, pool[draw.below(pool.size())]);
    }
    rows.push_back(std::move(row));
  }
  std::map<std::string, std::vector<FactRow>> facts{{"sales", std::move(rows)}};
  return assemble(schema, members, facts);
}

std::shared_ptr<const WarehouseInstance> load_files(const WarehouseFiles& files, const std::filesystem::path& base_dir) {
  const WarehouseSchema schema = parse_schema(files.model(), base_dir);
  return load_instance(schema, files.reader());
}

}  // namespace xolap

#include <algorithm>
#include <map>
#include <unordered_map>

#include "xolap/algebra.hpp"
#include "xolap/tax.hpp"

namespace xolap {
namespace {

using AncestorMap = std::unordered_map<std::string, std::string>;

std::string_view dimension_ref(const DataTree& tree, NodeId fact, std::string_view dimension) {
  for (NodeId c : tree.node(fact).children) {
    const Node& n = tree.node(c);
    if (n.kind == NodeKind::Element && n.name == "dimension" && tree.attribute(c, "idref") == dimension) {
      return tree.attribute(c, "value-id").value_or(kUnknownMember);
    }
  }
  return kUnknownMember;
}

Decimal measure_value(const DataTree& tree, NodeId fact, std::string_view name) {
  for (NodeId c : tree.node(fact).children) {
    const Node& n = tree.node(c);
    if (n.kind == NodeKind::Element && n.name == "measure" && tree.attribute(c, "name") == name) {
      if (auto d = Decimal::parse(tree.attribute(c, "value").value_or(""))) return *d;
    }
  }
  throw Error(ErrorCode::IntegrityError, "fact at " + tree.path(fact) + " has no value for measure '" +
                                             std::string(name) + "'");
}

// Everything evaluation needs that depends only on the state and the
// dimension tables, computed once per evaluation.
class Lowering {
 public:
  Lowering(const WarehouseInstance& instance, const QueryState& state) : instance_(instance), state_(state) {
    const FactSpec* fact = instance.schema().find_fact(state.fact_class);
    if (fact == nullptr) throw Error(ErrorCode::UnknownFactClass, "unknown fact class '" + state.fact_class + "'");
    fact_ = fact;
  }

  const FactSpec& fact() const { return *fact_; }

  // FactDoc/fact!, with one dimension child per predicate whose value-id
  // must be a member that resolves into the allowed set.
  tax::PatternTree selection_pattern() {
    tax::PatternTree pattern("FactDoc");
    const int fact = pattern.add_child(0, tax::EdgeKind::ParentChild, "fact");
    pattern.set_output(fact);
    for (const auto& p : state_.predicates) {
      const AncestorMap& up = ancestors(p.dimension, p.level);
      std::vector<std::string> accepted;
      for (const auto& m : instance_.dimension(p.dimension).members()) {
        const std::string& a = up.at(m.member_id);
        if (std::find(p.members.begin(), p.members.end(), a) != p.members.end()) accepted.push_back(m.member_id);
      }
      const int dim = pattern.add_child(fact, tax::EdgeKind::ParentChild, "dimension");
      pattern.node(dim).predicates.push_back({"idref", tax::Comparison::Eq, {p.dimension}});
      pattern.node(dim).predicates.push_back({"value-id", tax::Comparison::In, std::move(accepted)});
    }
    return pattern;
  }

  // One collapse mask per emitted grouping; a set entry collapses that axis to ALL.
  std::vector<std::vector<bool>> groupings() const {
    const std::size_t n = state_.axes.size();
    if (!state_.cube_axes) return {std::vector<bool>(n, false)};
    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < n; ++i) {
      if (state_.is_cube_axis(state_.axes[i].dimension)) positions.push_back(i);
    }
    std::vector<std::vector<bool>> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << positions.size()); ++mask) {
      std::vector<bool> collapsed(n, false);
      for (std::size_t b = 0; b < positions.size(); ++b) collapsed[positions[b]] = ((mask >> b) & 1U) != 0;
      out.push_back(std::move(collapsed));
    }
    return out;
  }

  const AncestorMap& ancestors(const std::string& dimension, const std::string& level) {
    auto key = dimension + '\n' + level;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const DimensionTable& table = instance_.dimension(dimension);
    AncestorMap map;
    for (const auto& m : table.members()) map.emplace(m.member_id, ancestor_at_level(table, m.member_id, level));
    map.emplace(std::string(kUnknownMember), std::string(kUnknownMember));
    return cache_.emplace(std::move(key), std::move(map)).first->second;
  }

  std::string resolve(const std::string& dimension, const std::string& level, const TreeRef& fact) {
    const std::string_view ref = dimension_ref(fact.doc(), fact.root, dimension);
    const AncestorMap& up = ancestors(dimension, level);
    auto it = up.find(std::string(ref));
    if (it == up.end()) {
      throw Error(ErrorCode::IntegrityError, "fact at " + fact.doc().path(fact.root) + " references unknown " +
                                                 dimension + " member '" + std::string(ref) + "'");
    }
    return it->second;
  }

  Decimal extract(const MeasureRef& m, const TreeRef& fact) {
    switch (m.source) {
      case MeasureSource::Native: return measure_value(fact.doc(), fact.root, m.name);
      case MeasureSource::ImplicitCount: return Decimal(1);
      case MeasureSource::PushedAttribute: {
        const std::string owner = resolve(m.dimension, m.level, fact);
        if (owner == kUnknownMember || owner == kUnassignedMember) return Decimal(0);
        return instance_.dimension(m.dimension).numeric_attribute(owner, m.attribute).value_or(Decimal(0));
      }
    }
    return Decimal(0);
  }

  tax::KeyFunction key_function(const std::vector<bool>& collapsed) {
    return [this, collapsed](const TreeRef& fact) -> std::optional<tax::GroupKey> {
      tax::GroupKey key;
      key.reserve(state_.axes.size());
      for (std::size_t i = 0; i < state_.axes.size(); ++i) {
        const Axis& axis = state_.axes[i];
        if (collapsed[i]) {
          key.emplace_back(kAllMember);
        } else if (axis.is_pulled()) {
          key.push_back(extract(*axis.pulled, fact).str());
        } else {
          key.push_back(resolve(axis.dimension, axis.level, fact));
        }
      }
      return key;
    };
  }

 private:
  const WarehouseInstance& instance_;
  const QueryState& state_;
  const FactSpec* fact_ = nullptr;
  std::unordered_map<std::string, AncestorMap> cache_;
};

std::string grouping_label(const QueryState& state, const std::vector<bool>& collapsed) {
  std::string out = "(";
  for (std::size_t i = 0; i < state.axes.size(); ++i) {
    if (i) out += ", ";
    out += collapsed[i] ? state.axes[i].dimension + "=*" : state.axes[i].dimension + "@" + state.axes[i].level;
  }
  return out + ")";
}

// Position of a coordinate component within its axis layout; ALL sorts last.
std::size_t rank_of(const AxisLayout& axis, const std::string& member) {
  if (member == kAllMember) return axis.members.size();
  auto it = std::find(axis.members.begin(), axis.members.end(), member);
  return static_cast<std::size_t>(it - axis.members.begin());
}

}  // namespace

CubeView evaluate(const WarehouseInstance& instance, const QueryState& state) {
  Lowering lowering(instance, state);
  const tax::PatternTree pattern = lowering.selection_pattern();
  const Forest facts = tax::selection(pattern, Forest{TreeRef{instance.fact_tree(state.fact_class), 0}});

  std::map<Coordinate, std::vector<Decimal>> cells;
  for (const auto& collapsed : lowering.groupings()) {
    const tax::GroupedForest groups = tax::group_forest(facts, lowering.key_function(collapsed));
    for (std::size_t m = 0; m < state.measures.size(); ++m) {
      const MeasureRef& measure = state.measures[m];
      auto values = tax::aggregate(
          groups, [&](const TreeRef& fact) { return lowering.extract(measure, fact); }, measure.fn);
      for (auto& [key, value] : values) {
        auto& slot = cells[key];
        slot.resize(state.measures.size());
        slot[m] = value;
      }
    }
  }

  CubeView view;
  view.fact_class = state.fact_class;
  view.provenance = state;
  for (const auto& m : state.measures) view.measures.push_back(MeasureColumn{m.name, m.fn});
  for (std::size_t i = 0; i < state.axes.size(); ++i) {
    const Axis& axis = state.axes[i];
    AxisLayout layout{axis.dimension, axis.level, axis.member_order, axis.is_pulled()};
    if (axis.is_pulled()) {
      std::vector<Decimal> values;
      for (const auto& [coord, _] : cells) {
        if (coord[i] != kAllMember) values.push_back(*Decimal::parse(coord[i]));
      }
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      for (const auto& v : values) layout.members.push_back(v.str());
    } else {
      for (std::string_view sentinel : {kUnassignedMember, kUnknownMember}) {
        const bool present = std::any_of(cells.begin(), cells.end(),
                                         [&](const auto& c) { return c.first[i] == sentinel; });
        if (present) layout.members.emplace_back(sentinel);
      }
    }
    view.axes.push_back(std::move(layout));
  }
  for (auto& [coord, values] : cells) view.cells.push_back(Cell{coord, std::move(values)});
  std::stable_sort(view.cells.begin(), view.cells.end(), [&](const Cell& a, const Cell& b) {
    for (std::size_t i = 0; i < view.axes.size(); ++i) {
      const std::size_t ra = rank_of(view.axes[i], a.coord[i]);
      const std::size_t rb = rank_of(view.axes[i], b.coord[i]);
      if (ra != rb) return ra < rb;
    }
    return false;
  });
  return view;
}

std::string explain(const WarehouseInstance& instance, const QueryState& state) {
  Lowering lowering(instance, state);
  const std::string pattern = lowering.selection_pattern().str();
  const auto groupings = lowering.groupings();
  std::string measures;
  for (const auto& m : state.measures) {
    measures += (measures.empty() ? "" : ", ") + std::string(to_string(m.fn)) + "(" + m.name + ")";
  }
  std::string out;
  std::string indent;
  if (groupings.size() > 1) {
    out += "union groupings=" + std::to_string(groupings.size()) + "\n";
    indent = "  ";
  }
  for (const auto& collapsed : groupings) {
    out += indent + "aggregate " + measures + "\n";
    out += indent + "  group " + grouping_label(state, collapsed) + "\n";
    out += indent + "    select " + pattern + "\n";
    out += indent + "      scan " + lowering.fact().document_path + "\n";
  }
  return out;
}

}  // namespace xolap

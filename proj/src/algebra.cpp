#include "xolap/algebra.hpp"

#include <algorithm>
#include <set>

namespace xolap {

const Axis* QueryState::find_axis(std::string_view dimension) const {
  auto it = std::find_if(axes.begin(), axes.end(), [&](const Axis& a) { return a.dimension == dimension; });
  return it == axes.end() ? nullptr : &*it;
}

std::optional<std::size_t> QueryState::axis_index(std::string_view dimension) const {
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (axes[i].dimension == dimension) return i;
  }
  return std::nullopt;
}

const MeasureRef* QueryState::find_measure(std::string_view name) const {
  auto it = std::find_if(measures.begin(), measures.end(), [&](const MeasureRef& m) { return m.name == name; });
  return it == measures.end() ? nullptr : &*it;
}

bool QueryState::is_cube_axis(std::string_view dimension) const {
  return cube_axes && std::find(cube_axes->begin(), cube_axes->end(), dimension) != cube_axes->end();
}

namespace {

std::string q(std::string_view s) { return "'" + std::string(s) + "'"; }

const FactSpec& fact_of(const WarehouseInstance& instance, const QueryState& state) {
  const FactSpec* fact = instance.schema().find_fact(state.fact_class);
  if (fact == nullptr) throw Error(ErrorCode::UnknownFactClass, "unknown fact class " + q(state.fact_class));
  return *fact;
}

// Linked dimension table; UnknownDimension otherwise.
const DimensionTable& linked_dimension(const WarehouseInstance& instance, const QueryState& state,
                                       std::string_view dimension) {
  if (!fact_of(instance, state).links(dimension)) {
    throw Error(ErrorCode::UnknownDimension,
                "dimension " + q(dimension) + " is not linked by fact class " + q(state.fact_class));
  }
  return instance.dimension(dimension);
}

const LevelSpec& level_of(const DimensionTable& table, std::string_view level) {
  if (const LevelSpec* l = table.spec().find_level(level)) return *l;
  throw Error(ErrorCode::UnknownLevel, "dimension " + q(table.id()) + " has no level " + q(level));
}

void require_member_at(const DimensionTable& table, std::string_view level, std::string_view member) {
  const DimensionMember* m = table.find(member);
  if (m == nullptr || m->level_id != level) {
    throw Error(ErrorCode::UnknownMember,
                "dimension " + q(table.id()) + " has no member " + q(member) + " at level " + q(level));
  }
}

Axis& hierarchy_axis(QueryState& state, std::string_view dimension) {
  auto idx = state.axis_index(dimension);
  if (!idx) throw Error(ErrorCode::NotAnAxis, "dimension " + q(dimension) + " is not on an axis");
  Axis& axis = state.axes[*idx];
  if (axis.is_pulled()) throw Error(ErrorCode::PulledAxis, "axis " + q(dimension) + " is a pulled measure axis");
  return axis;
}

void drop_axis(QueryState& state, std::string_view dimension) {
  std::erase_if(state.axes, [&](const Axis& a) { return a.dimension == dimension; });
  if (state.cube_axes) {
    std::erase(*state.cube_axes, std::string(dimension));
    if (state.cube_axes->empty()) state.cube_axes.reset();
  }
}

}  // namespace

QueryState base(const WarehouseInstance& instance, std::string_view fact_class, const std::vector<AxisSpec>& axes,
                const std::optional<std::vector<MeasureOverride>>& measures) {
  QueryState state;
  state.fact_class = std::string(fact_class);
  const FactSpec& fact = fact_of(instance, state);
  for (const auto& spec : axes) {
    const DimensionTable& table = linked_dimension(instance, state, spec.dimension);
    level_of(table, spec.level);
    if (state.find_axis(spec.dimension) != nullptr) {
      throw Error(ErrorCode::DuplicateAxis, "dimension " + q(spec.dimension) + " appears twice on the axes");
    }
    state.axes.push_back(Axis{spec.dimension, spec.level, table.members_at(spec.level), std::nullopt});
  }
  if (measures) {
    for (const auto& m : *measures) {
      const MeasureSpec* ms = fact.find_measure(m.name);
      if (ms == nullptr) throw Error(ErrorCode::UnknownMeasure, "fact class has no measure " + q(m.name));
      if (state.find_measure(m.name) != nullptr) {
        throw Error(ErrorCode::DuplicateMeasure, "measure " + q(m.name) + " listed twice");
      }
      state.measures.push_back(MeasureRef{ms->name, m.fn.value_or(ms->aggregate), MeasureSource::Native, {}, {}, {}});
    }
  } else {
    for (const auto& ms : fact.measures) {
      state.measures.push_back(MeasureRef{ms.name, ms.aggregate, MeasureSource::Native, {}, {}, {}});
    }
  }
  if (state.measures.empty()) {
    state.measures.push_back(MeasureRef{std::string(kImplicitCount), AggregateFn::Count, MeasureSource::ImplicitCount});
  }
  return state;
}

QueryState slice(const WarehouseInstance& instance, QueryState state, std::string_view dimension,
                 std::string_view level, std::string_view member_id) {
  const DimensionTable& table = linked_dimension(instance, state, dimension);
  level_of(table, level);
  require_member_at(table, level, member_id);
  state.predicates.push_back(Predicate{std::string(dimension), std::string(level), {std::string(member_id)}});
  drop_axis(state, dimension);
  return state;
}

QueryState dice(const WarehouseInstance& instance, QueryState state, const std::vector<Predicate>& predicates) {
  for (const auto& p : predicates) {
    const DimensionTable& table = linked_dimension(instance, state, p.dimension);
    level_of(table, p.level);
    if (p.members.empty()) {
      throw Error(ErrorCode::EmptyMemberSet, "dice on " + q(p.dimension) + " with an empty member set");
    }
    for (const auto& m : p.members) require_member_at(table, p.level, m);
  }
  for (const auto& p : predicates) {
    Predicate normalized = p;
    std::set<std::string> seen;
    std::erase_if(normalized.members, [&](const std::string& m) { return !seen.insert(m).second; });
    state.predicates.push_back(std::move(normalized));
  }
  return state;
}

QueryState roll_up(const WarehouseInstance& instance, QueryState state, std::string_view dimension,
                   std::string_view to_level) {
  Axis& axis = hierarchy_axis(state, dimension);
  const DimensionTable& table = instance.dimension(dimension);
  const LevelSpec& target = level_of(table, to_level);
  if (target.depth <= table.depth_of(axis.level)) {
    throw Error(ErrorCode::NotCoarser, "level " + q(to_level) + " is not coarser than " + q(axis.level));
  }
  axis.level = target.id;
  axis.member_order = table.members_at(target.id);
  return state;
}

QueryState drill_down(const WarehouseInstance& instance, QueryState state, std::string_view dimension,
                      std::string_view to_level) {
  Axis& axis = hierarchy_axis(state, dimension);
  const DimensionTable& table = instance.dimension(dimension);
  const LevelSpec& target = level_of(table, to_level);
  if (target.depth >= table.depth_of(axis.level)) {
    throw Error(ErrorCode::NotFiner, "level " + q(to_level) + " is not finer than " + q(axis.level));
  }
  axis.level = target.id;
  axis.member_order = table.members_at(target.id);
  return state;
}

QueryState rotate(QueryState state, const std::vector<std::size_t>& permutation) {
  const std::size_t n = state.axes.size();
  std::vector<bool> seen(n, false);
  if (permutation.size() != n) {
    throw Error(ErrorCode::InvalidPermutation, "permutation has " + std::to_string(permutation.size()) +
                                                   " entries for " + std::to_string(n) + " axes");
  }
  for (std::size_t p : permutation) {
    if (p >= n || seen[p]) throw Error(ErrorCode::InvalidPermutation, "permutation is not a bijection");
    seen[p] = true;
  }
  std::vector<Axis> rotated;
  rotated.reserve(n);
  for (std::size_t p : permutation) rotated.push_back(state.axes[p]);
  state.axes = std::move(rotated);
  return state;
}

QueryState switch_members(QueryState state, std::string_view dimension, const std::vector<std::string>& order) {
  Axis& axis = hierarchy_axis(state, dimension);
  std::vector<std::string> given = order;
  std::vector<std::string> current = axis.member_order;
  std::sort(given.begin(), given.end());
  std::sort(current.begin(), current.end());
  if (given != current) {
    throw Error(ErrorCode::NotAPermutation,
                "new order for " + q(dimension) + " is not a permutation of the current members");
  }
  axis.member_order = order;
  return state;
}

QueryState push(const WarehouseInstance& instance, QueryState state, std::string_view dimension,
                std::string_view level, std::string_view attribute) {
  const DimensionTable& table = linked_dimension(instance, state, dimension);
  const LevelSpec& l = level_of(table, level);
  const AttributeSpec* attr = l.find_attribute(attribute);
  if (attr == nullptr) {
    throw Error(ErrorCode::UnknownAttribute, "level " + q(level) + " has no attribute " + q(attribute));
  }
  if (!is_numeric(attr->type)) {
    throw Error(ErrorCode::NonNumericAttribute, "attribute " + q(attribute) + " has type " +
                                                    std::string(to_string(attr->type)));
  }
  std::string name = std::string(dimension) + "." + std::string(level) + "." + std::string(attribute);
  if (state.find_measure(name) != nullptr) {
    throw Error(ErrorCode::DuplicateMeasure, "measure " + q(name) + " already exists");
  }
  state.measures.push_back(MeasureRef{std::move(name), AggregateFn::Sum, MeasureSource::PushedAttribute,
                                      std::string(dimension), std::string(level), std::string(attribute)});
  return state;
}

QueryState pull(QueryState state, std::string_view measure) {
  auto it = std::find_if(state.measures.begin(), state.measures.end(),
                         [&](const MeasureRef& m) { return m.name == measure; });
  if (it == state.measures.end()) throw Error(ErrorCode::UnknownMeasure, "no measure " + q(measure) + " to pull");
  std::string axis_name = std::string(kPulledPrefix) + std::string(measure);
  if (state.find_axis(axis_name) != nullptr) {
    throw Error(ErrorCode::DuplicateAxis, "axis " + q(axis_name) + " already exists");
  }
  MeasureRef pulled = *it;
  state.measures.erase(it);
  state.axes.push_back(Axis{std::move(axis_name), std::string(kPulledLevel), {}, std::move(pulled)});
  if (state.measures.empty()) {
    state.measures.push_back(MeasureRef{std::string(kImplicitCount), AggregateFn::Count, MeasureSource::ImplicitCount});
  }
  return state;
}

QueryState cube(QueryState state, const std::vector<std::string>& dimensions) {
  if (dimensions.empty()) throw Error(ErrorCode::EmptySubset, "cube needs at least one axis");
  std::vector<std::string> chosen;
  for (const auto& d : dimensions) {
    if (state.find_axis(d) == nullptr) throw Error(ErrorCode::NotAnAxis, "dimension " + q(d) + " is not on an axis");
    if (std::find(chosen.begin(), chosen.end(), d) == chosen.end()) chosen.push_back(d);
  }
  state.cube_axes = std::move(chosen);
  return state;
}

const Cell* CubeView::find(const Coordinate& coord) const {
  auto it = std::find_if(cells.begin(), cells.end(), [&](const Cell& c) { return c.coord == coord; });
  return it == cells.end() ? nullptr : &*it;
}

std::optional<Decimal> CubeView::value(const Coordinate& coord, std::string_view measure) const {
  const Cell* cell = find(coord);
  if (cell == nullptr) return std::nullopt;
  for (std::size_t i = 0; i < measures.size(); ++i) {
    if (measures[i].name == measure) return cell->values[i];
  }
  return std::nullopt;
}

}  // namespace xolap

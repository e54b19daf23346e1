#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xolap/decimal.hpp"
#include "xolap/schema.hpp"
#include "xolap/store.hpp"

namespace xolap {

// Prefix of the pseudo-dimension created by pull: "μ:<measure>".
inline constexpr std::string_view kPulledPrefix = "\xCE\xBC:";
inline constexpr std::string_view kPulledLevel = "value";
inline constexpr std::string_view kImplicitCount = "count";

enum class MeasureSource { Native, PushedAttribute, ImplicitCount };

struct MeasureRef {
  std::string name;
  AggregateFn fn = AggregateFn::Sum;
  MeasureSource source = MeasureSource::Native;
  // PushedAttribute only.
  std::string dimension;
  std::string level;
  std::string attribute;

  friend bool operator==(const MeasureRef&, const MeasureRef&) = default;
};

struct Axis {
  std::string dimension;  // dimension id, or kPulledPrefix + measure name
  std::string level;
  std::vector<std::string> member_order;  // empty for pulled axes (value order)
  std::optional<MeasureRef> pulled;       // the measure a pulled axis came from

  bool is_pulled() const noexcept { return pulled.has_value(); }
  friend bool operator==(const Axis&, const Axis&) = default;
};

struct Predicate {
  std::string dimension;
  std::string level;
  std::vector<std::string> members;  // disjunctive

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

// The accumulated meaning of an operator pipeline. Operators rewrite it
// without touching fact data; only evaluate() reads facts.
struct QueryState {
  std::string fact_class;
  std::vector<Predicate> predicates;  // conjunctive
  std::vector<Axis> axes;
  std::vector<MeasureRef> measures;
  std::optional<std::vector<std::string>> cube_axes;  // axis dimension ids

  const Axis* find_axis(std::string_view dimension) const;
  std::optional<std::size_t> axis_index(std::string_view dimension) const;
  const MeasureRef* find_measure(std::string_view name) const;
  bool is_cube_axis(std::string_view dimension) const;

  friend bool operator==(const QueryState&, const QueryState&) = default;
};

struct AxisSpec {
  std::string dimension;
  std::string level;
};

struct MeasureOverride {
  std::string name;
  std::optional<AggregateFn> fn;
};

QueryState base(const WarehouseInstance& instance, std::string_view fact_class, const std::vector<AxisSpec>& axes,
                const std::optional<std::vector<MeasureOverride>>& measures = std::nullopt);
QueryState slice(const WarehouseInstance& instance, QueryState state, std::string_view dimension,
                 std::string_view level, std::string_view member_id);
QueryState dice(const WarehouseInstance& instance, QueryState state, const std::vector<Predicate>& predicates);
QueryState roll_up(const WarehouseInstance& instance, QueryState state, std::string_view dimension,
                   std::string_view to_level);
QueryState drill_down(const WarehouseInstance& instance, QueryState state, std::string_view dimension,
                      std::string_view to_level);
// New axis i is old axis permutation[i].
QueryState rotate(QueryState state, const std::vector<std::size_t>& permutation);
QueryState switch_members(QueryState state, std::string_view dimension, const std::vector<std::string>& order);
QueryState push(const WarehouseInstance& instance, QueryState state, std::string_view dimension,
                std::string_view level, std::string_view attribute);
QueryState pull(QueryState state, std::string_view measure);
QueryState cube(QueryState state, const std::vector<std::string>& dimensions);

using Coordinate = std::vector<std::string>;

struct AxisLayout {
  std::string dimension;
  std::string level;
  std::vector<std::string> members;  // display order, sentinels appended
  bool pulled = false;

  friend bool operator==(const AxisLayout&, const AxisLayout&) = default;
};

struct MeasureColumn {
  std::string name;
  AggregateFn fn = AggregateFn::Sum;

  friend bool operator==(const MeasureColumn&, const MeasureColumn&) = default;
};

struct Cell {
  Coordinate coord;
  std::vector<Decimal> values;  // aligned with CubeView::measures

  friend bool operator==(const Cell&, const Cell&) = default;
};

// Materialized sparse result. Cells are sorted by axis member order with
// the ALL token last.
struct CubeView {
  std::string fact_class;
  std::vector<AxisLayout> axes;
  std::vector<MeasureColumn> measures;
  std::vector<Cell> cells;
  QueryState provenance;

  const Cell* find(const Coordinate& coord) const;
  std::optional<Decimal> value(const Coordinate& coord, std::string_view measure) const;
};

CubeView evaluate(const WarehouseInstance& instance, const QueryState& state);

// Textual dump of the tree-algebra plan evaluate() executes: one operator
// per line, pre-order.
std::string explain(const WarehouseInstance& instance, const QueryState& state);

}  // namespace xolap

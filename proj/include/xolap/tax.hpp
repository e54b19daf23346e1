#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xolap/decimal.hpp"
#include "xolap/schema.hpp"
#include "xolap/xml.hpp"

// Tree-algebra substrate: pattern trees with pc/ad edges, witness trees,
// and the selection / projection / grouping / aggregation operators.
namespace xolap::tax {

enum class EdgeKind { ParentChild, AncestorDescendant };
enum class Comparison { Eq, Ne, Lt, Le, Gt, Ge, In };

std::string_view to_string(Comparison c) noexcept;

// Test on an attribute of the bound element (or its text when `attribute` is
// empty). Operands compare numerically when both sides parse as decimals,
// lexicographically otherwise. `In` holds against any of several operands.
struct ValuePredicate {
  std::string attribute;
  Comparison op = Comparison::Eq;
  std::vector<std::string> operands;

  bool holds(const DataTree& tree, NodeId element) const;
};

struct PatternNode {
  std::string label;  // element tag, "*" for any
  std::vector<ValuePredicate> predicates;
  int parent = -1;
  EdgeKind edge = EdgeKind::ParentChild;  // edge from parent
  bool keep_subtree = false;              // projection keeps the whole subtree
};

class PatternTree {
 public:
  explicit PatternTree(std::string root_label);

  int add_child(int parent, EdgeKind edge, std::string label);
  PatternNode& node(int index) { return nodes_.at(static_cast<std::size_t>(index)); }
  const PatternNode& node(int index) const { return nodes_.at(static_cast<std::size_t>(index)); }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::vector<int> children(int index) const;

  void set_output(int index);
  int output() const noexcept { return output_; }

  bool label_matches(int index, const DataTree& tree, NodeId node) const;
  std::string str() const;

 private:
  void render(int index, std::string& out) const;

  std::vector<PatternNode> nodes_;
  int output_ = 0;
};

// binding[i] is the data node the i-th pattern node maps to.
struct WitnessTree {
  TreeRef source;
  std::vector<NodeId> binding;

  NodeId image(int pattern_node) const { return binding.at(static_cast<std::size_t>(pattern_node)); }
};

std::vector<WitnessTree> match_pattern(const PatternTree& pattern, const Forest& forest);
Forest selection(const PatternTree& pattern, const Forest& forest);
std::vector<DataTree> projection(const PatternTree& pattern, const Forest& forest);

using GroupKey = std::vector<std::string>;

struct Group {
  GroupKey key;
  Forest members;
};

struct GroupedForest {
  std::vector<Group> groups;
};

// nullopt from the key function raises KeyError.
using KeyFunction = std::function<std::optional<GroupKey>(const TreeRef&)>;
using MeasureExtractor = std::function<Decimal(const TreeRef&)>;

GroupedForest group_forest(const Forest& forest, const KeyFunction& key);

Decimal fold(const Forest& members, const MeasureExtractor& extract, AggregateFn fn);
std::vector<std::pair<GroupKey, Decimal>> aggregate(const GroupedForest& groups, const MeasureExtractor& extract,
                                                    AggregateFn fn);

}  // namespace xolap::tax

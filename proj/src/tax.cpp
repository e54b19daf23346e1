#include "xolap/tax.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "xolap/error.hpp"

namespace xolap::tax {

std::string_view to_string(Comparison c) noexcept {
  switch (c) {
    case Comparison::Eq: return "=";
    case Comparison::Ne: return "!=";
    case Comparison::Lt: return "<";
    case Comparison::Le: return "<=";
    case Comparison::Gt: return ">";
    case Comparison::Ge: return ">=";
    case Comparison::In: return "in";
  }
  return "=";
}

namespace {

int compare_scalars(std::string_view a, std::string_view b) {
  auto x = Decimal::parse(a);
  auto y = Decimal::parse(b);
  if (x && y) {
    auto order = *x <=> *y;
    return order < 0 ? -1 : (order > 0 ? 1 : 0);
  }
  const int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

bool test(Comparison op, int c) {
  switch (op) {
    case Comparison::Eq:
    case Comparison::In: return c == 0;
    case Comparison::Ne: return c != 0;
    case Comparison::Lt: return c < 0;
    case Comparison::Le: return c <= 0;
    case Comparison::Gt: return c > 0;
    case Comparison::Ge: return c >= 0;
  }
  return false;
}

}  // namespace

bool ValuePredicate::holds(const DataTree& tree, NodeId element) const {
  std::string value;
  if (attribute.empty()) {
    value = tree.text(element);
  } else if (auto v = tree.attribute(element, attribute)) {
    value = *v;
  } else {
    return false;
  }
  if (op == Comparison::In) {
    return std::any_of(operands.begin(), operands.end(),
                       [&](const std::string& o) { return compare_scalars(value, o) == 0; });
  }
  return !operands.empty() && test(op, compare_scalars(value, operands.front()));
}

PatternTree::PatternTree(std::string root_label) { nodes_.push_back(PatternNode{std::move(root_label), {}, -1}); }

int PatternTree::add_child(int parent, EdgeKind edge, std::string label) {
  if (parent < 0 || static_cast<std::size_t>(parent) >= nodes_.size()) {
    throw std::out_of_range("pattern parent index out of range");
  }
  nodes_.push_back(PatternNode{std::move(label), {}, parent, edge});
  return static_cast<int>(nodes_.size()) - 1;
}

std::vector<int> PatternTree::children(int index) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].parent == index) out.push_back(static_cast<int>(i));
  }
  return out;
}

void PatternTree::set_output(int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= nodes_.size()) {
    throw std::out_of_range("pattern output index out of range");
  }
  output_ = index;
}

bool PatternTree::label_matches(int index, const DataTree& tree, NodeId id) const {
  const Node& n = tree.node(id);
  const PatternNode& p = node(index);
  if (n.kind != NodeKind::Element) return false;
  if (p.label != "*" && p.label != n.name) return false;
  return std::all_of(p.predicates.begin(), p.predicates.end(),
                     [&](const ValuePredicate& pred) { return pred.holds(tree, id); });
}

void PatternTree::render(int index, std::string& out) const {
  const PatternNode& p = node(index);
  out += p.label;
  for (const auto& pred : p.predicates) {
    out += "[" + (pred.attribute.empty() ? std::string("text()") : "@" + pred.attribute) + " " +
           std::string(to_string(pred.op)) + " ";
    if (pred.op == Comparison::In) {
      out += "(";
      for (std::size_t i = 0; i < pred.operands.size(); ++i) out += (i ? "," : "") + pred.operands[i];
      out += ")";
    } else {
      out += pred.operands.empty() ? "" : pred.operands.front();
    }
    out += "]";
  }
  if (index == output_) out += "!";
  const auto kids = children(index);
  if (kids.empty()) return;
  out += "{";
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) out += " ";
    out += node(kids[i]).edge == EdgeKind::ParentChild ? "/" : "//";
    render(kids[i], out);
  }
  out += "}";
}

std::string PatternTree::str() const {
  std::string out;
  render(0, out);
  return out;
}

namespace {

using Binding = std::vector<NodeId>;

// All embeddings of the pattern subtree rooted at `pnode` with `pnode`
// mapped to `dnode`; each result binds exactly that pattern subtree.
void embed(const PatternTree& pattern, const DataTree& tree, int pnode, NodeId dnode,
           std::vector<Binding>& out) {
  Binding seed(pattern.size(), kNoNode);
  seed[static_cast<std::size_t>(pnode)] = dnode;
  std::vector<Binding> partial{std::move(seed)};
  for (int child : pattern.children(pnode)) {
    std::vector<NodeId> candidates;
    if (pattern.node(child).edge == EdgeKind::ParentChild) {
      for (NodeId c : tree.node(dnode).children) {
        if (pattern.label_matches(child, tree, c)) candidates.push_back(c);
      }
    } else {
      for (NodeId c = dnode + 1; c <= tree.node(dnode).last; ++c) {
        if (pattern.label_matches(child, tree, c)) candidates.push_back(c);
      }
    }
    std::vector<Binding> sub;
    for (NodeId c : candidates) embed(pattern, tree, child, c, sub);
    std::vector<Binding> next;
    for (const auto& p : partial) {
      for (const auto& s : sub) {
        Binding merged = p;
        for (std::size_t i = 0; i < merged.size(); ++i) {
          if (s[i] != kNoNode) merged[i] = s[i];
        }
        next.push_back(std::move(merged));
      }
    }
    partial = std::move(next);
    if (partial.empty()) return;
  }
  for (auto& b : partial) out.push_back(std::move(b));
}

}  // namespace

std::vector<WitnessTree> match_pattern(const PatternTree& pattern, const Forest& forest) {
  std::vector<WitnessTree> out;
  for (const TreeRef& ref : forest) {
    if (!ref.tree || ref.tree->empty()) continue;
    const DataTree& tree = *ref.tree;
    std::vector<Binding> found;
    for (NodeId id = ref.root; id <= tree.node(ref.root).last; ++id) {
      if (pattern.label_matches(0, tree, id)) embed(pattern, tree, 0, id, found);
    }
    const auto out_index = static_cast<std::size_t>(pattern.output());
    std::stable_sort(found.begin(), found.end(),
                     [&](const Binding& a, const Binding& b) { return a[out_index] < b[out_index]; });
    for (auto& b : found) out.push_back(WitnessTree{ref, std::move(b)});
  }
  return out;
}

Forest selection(const PatternTree& pattern, const Forest& forest) {
  Forest out;
  for (const auto& w : match_pattern(pattern, forest)) out.push_back(TreeRef{w.source.tree, w.image(pattern.output())});
  return out;
}

namespace {

void copy_kept(const DataTree& src, NodeId id, const std::vector<bool>& keep, DataTree& dst, NodeId dst_parent) {
  const Node& n = src.node(id);
  switch (n.kind) {
    case NodeKind::Attribute: dst.add_attribute(dst_parent, n.name, n.value); return;
    case NodeKind::Text: dst.add_text(dst_parent, n.value); return;
    case NodeKind::Element: break;
  }
  const NodeId copy = dst.add_element(dst_parent, n.name, n.line);
  for (NodeId c : n.children) {
    if (keep[c]) copy_kept(src, c, keep, dst, copy);
  }
}

}  // namespace

std::vector<DataTree> projection(const PatternTree& pattern, const Forest& forest) {
  std::vector<DataTree> out;
  const auto witnesses = match_pattern(pattern, forest);
  // Witnesses sharing a source tree and a root image project into one tree.
  std::map<std::pair<const DataTree*, NodeId>, std::vector<const WitnessTree*>> by_root;
  std::vector<std::pair<const DataTree*, NodeId>> order;
  for (const auto& w : witnesses) {
    auto key = std::make_pair(w.source.tree.get(), w.image(0));
    auto [it, inserted] = by_root.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&w);
  }
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) {
      auto pos = [&](const DataTree* t) {
        for (std::size_t i = 0; i < forest.size(); ++i) {
          if (forest[i].tree.get() == t) return i;
        }
        return forest.size();
      };
      return pos(a.first) < pos(b.first);
    }
    return a.second < b.second;
  });
  for (const auto& key : order) {
    const DataTree& src = *key.first;
    std::vector<bool> keep(src.size(), false);
    for (const WitnessTree* w : by_root[key]) {
      for (std::size_t p = 0; p < pattern.size(); ++p) {
        const NodeId bound = w->binding[p];
        for (NodeId cur = bound; cur != kNoNode && !keep[cur]; cur = src.node(cur).parent) {
          keep[cur] = true;
          if (cur == key.second) break;
        }
        if (pattern.node(static_cast<int>(p)).keep_subtree) {
          for (NodeId d = bound; d <= src.node(bound).last; ++d) keep[d] = true;
        } else {
          for (NodeId c : src.node(bound).children) {
            if (src.node(c).kind != NodeKind::Element) keep[c] = true;
          }
        }
      }
    }
    DataTree tree;
    copy_kept(src, key.second, keep, tree, kNoNode);
    tree.finish();
    out.push_back(std::move(tree));
  }
  return out;
}

GroupedForest group_forest(const Forest& forest, const KeyFunction& key) {
  GroupedForest out;
  std::map<GroupKey, std::size_t> index;
  for (const TreeRef& ref : forest) {
    auto k = key(ref);
    if (!k) {
      throw Error(ErrorCode::KeyError, "grouping key undefined for tree at " + ref.doc().path(ref.root));
    }
    auto [it, inserted] = index.try_emplace(*k, out.groups.size());
    if (inserted) out.groups.push_back(Group{*k, {}});
    out.groups[it->second].members.push_back(ref);
  }
  return out;
}

Decimal fold(const Forest& members, const MeasureExtractor& extract, AggregateFn fn) {
  if (fn == AggregateFn::Count) return Decimal(static_cast<std::int64_t>(members.size()));
  if (members.empty()) {
    if (fn == AggregateFn::Sum) return Decimal(0);
    throw Error(ErrorCode::EmptyGroupError, std::string(to_string(fn)) + " over an empty group");
  }
  Decimal acc = extract(members.front());
  for (std::size_t i = 1; i < members.size(); ++i) {
    const Decimal v = extract(members[i]);
    switch (fn) {
      case AggregateFn::Sum:
      case AggregateFn::Avg: acc += v; break;
      case AggregateFn::Min: acc = std::min(acc, v); break;
      case AggregateFn::Max: acc = std::max(acc, v); break;
      case AggregateFn::Count: break;
    }
  }
  if (fn == AggregateFn::Avg) return acc.divided_by(static_cast<std::int64_t>(members.size()));
  return acc;
}

std::vector<std::pair<GroupKey, Decimal>> aggregate(const GroupedForest& groups, const MeasureExtractor& extract,
                                                    AggregateFn fn) {
  std::vector<std::pair<GroupKey, Decimal>> out;
  out.reserve(groups.groups.size());
  for (const auto& g : groups.groups) out.emplace_back(g.key, fold(g.members, extract, fn));
  return out;
}

}  // namespace xolap::tax

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xolap {

enum class NodeKind : std::uint8_t { Element, Attribute, Text };

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

struct Node {
  NodeKind kind = NodeKind::Element;
  std::string name;   // tag or attribute name; empty for text
  std::string value;  // attribute value or text content
  NodeId parent = kNoNode;
  NodeId last = 0;    // last node id of this node's subtree (ids are pre-order)
  std::vector<NodeId> children;
  int line = 0;
};

// Ordered labeled tree. Node ids are assigned in pre-order, so id order is
// document order and a subtree occupies the contiguous id range [n, last].
// Attribute nodes are leaves placed before the element's content children.
class DataTree {
 public:
  DataTree() = default;

  NodeId add_element(NodeId parent, std::string tag, int line = 0);
  NodeId add_attribute(NodeId element, std::string name, std::string value);
  NodeId add_text(NodeId parent, std::string text);
  // Recomputes subtree extents; call once after building.
  void finish();

  bool empty() const noexcept { return nodes_.empty(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  NodeId root() const noexcept { return 0; }
  const Node& node(NodeId id) const { return nodes_.at(id); }

  std::optional<std::string_view> attribute(NodeId element, std::string_view name) const;
  std::vector<NodeId> child_elements(NodeId element) const;
  std::vector<NodeId> child_elements(NodeId element, std::string_view tag) const;
  // Concatenated text children.
  std::string text(NodeId element) const;

  bool is_proper_ancestor(NodeId ancestor, NodeId descendant) const noexcept {
    return ancestor < descendant && descendant <= nodes_[ancestor].last;
  }

  // Element path such as /FactDoc/fact[3]/measure[1] (1-based positions
  // among same-tag siblings).
  std::string path(NodeId id) const;

 private:
  std::vector<Node> nodes_;
};

// A tree fragment: the subtree of `root` within a shared document.
struct TreeRef {
  std::shared_ptr<const DataTree> tree;
  NodeId root = 0;

  const DataTree& doc() const { return *tree; }
  const Node& node() const { return tree->node(root); }
};

using Forest = std::vector<TreeRef>;

// Throws Error(MalformedXml) with line/column on ill-formed input.
DataTree parse_xml(std::string_view text);
std::shared_ptr<const DataTree> parse_xml_shared(std::string_view text);

std::string xml_escape(std::string_view text);
// Serializes a subtree; compact form, no declaration.
std::string to_xml(const TreeRef& ref);

}  // namespace xolap

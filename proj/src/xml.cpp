#include "xolap/xml.hpp"

#include <expat.h>

#include <algorithm>
#include <cctype>

#include "xolap/error.hpp"

namespace xolap {

NodeId DataTree::add_element(NodeId parent, std::string tag, int line) {
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{NodeKind::Element, std::move(tag), {}, parent, id, {}, line});
  if (parent != kNoNode) nodes_[parent].children.push_back(id);
  return id;
}

NodeId DataTree::add_attribute(NodeId element, std::string name, std::string value) {
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(
      Node{NodeKind::Attribute, std::move(name), std::move(value), element, id, {}, nodes_[element].line});
  nodes_[element].children.push_back(id);
  return id;
}

NodeId DataTree::add_text(NodeId parent, std::string text) {
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{NodeKind::Text, {}, std::move(text), parent, id, {}, nodes_[parent].line});
  nodes_[parent].children.push_back(id);
  return id;
}

void DataTree::finish() {
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    Node& n = nodes_[i];
    n.last = n.children.empty() ? static_cast<NodeId>(i) : nodes_[n.children.back()].last;
  }
}

std::optional<std::string_view> DataTree::attribute(NodeId element, std::string_view name) const {
  for (NodeId c : nodes_[element].children) {
    const Node& n = nodes_[c];
    if (n.kind != NodeKind::Attribute) break;
    if (n.name == name) return std::string_view(n.value);
  }
  return std::nullopt;
}

std::vector<NodeId> DataTree::child_elements(NodeId element) const {
  std::vector<NodeId> out;
  for (NodeId c : nodes_[element].children) {
    if (nodes_[c].kind == NodeKind::Element) out.push_back(c);
  }
  return out;
}

std::vector<NodeId> DataTree::child_elements(NodeId element, std::string_view tag) const {
  std::vector<NodeId> out;
  for (NodeId c : nodes_[element].children) {
    if (nodes_[c].kind == NodeKind::Element && nodes_[c].name == tag) out.push_back(c);
  }
  return out;
}

std::string DataTree::text(NodeId element) const {
  std::string out;
  for (NodeId c : nodes_[element].children) {
    if (nodes_[c].kind == NodeKind::Text) out += nodes_[c].value;
  }
  return out;
}

std::string DataTree::path(NodeId id) const {
  std::vector<std::string> steps;
  for (NodeId cur = id; cur != kNoNode; cur = nodes_[cur].parent) {
    const Node& n = nodes_[cur];
    if (n.kind == NodeKind::Attribute) {
      steps.push_back("@" + n.name);
      continue;
    }
    if (n.kind == NodeKind::Text) {
      steps.push_back("text()");
      continue;
    }
    std::string step = n.name;
    if (n.parent != kNoNode) {
      int position = 0;
      for (NodeId s : nodes_[n.parent].children) {
        if (nodes_[s].kind == NodeKind::Element && nodes_[s].name == n.name) {
          ++position;
          if (s == cur) break;
        }
      }
      step += "[" + std::to_string(position) + "]";
    }
    steps.push_back(std::move(step));
  }
  std::string out;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) out += "/" + *it;
  return out;
}

namespace {

struct ParseState {
  XML_Parser parser = nullptr;
  DataTree tree;
  std::vector<NodeId> stack;
  std::string pending_text;

  void flush_text() {
    if (pending_text.empty()) return;
    const bool blank = std::all_of(pending_text.begin(), pending_text.end(),
                                   [](unsigned char c) { return std::isspace(c) != 0; });
    if (!blank && !stack.empty()) tree.add_text(stack.back(), pending_text);
    pending_text.clear();
  }
};

void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  auto& st = *static_cast<ParseState*>(data);
  st.flush_text();
  const NodeId parent = st.stack.empty() ? kNoNode : st.stack.back();
  const int line = static_cast<int>(XML_GetCurrentLineNumber(st.parser));
  const NodeId id = st.tree.add_element(parent, name, line);
  for (int i = 0; attrs[i] != nullptr; i += 2) st.tree.add_attribute(id, attrs[i], attrs[i + 1]);
  st.stack.push_back(id);
}

void on_end(void* data, const XML_Char*) {
  auto& st = *static_cast<ParseState*>(data);
  st.flush_text();
  st.stack.pop_back();
}

void on_text(void* data, const XML_Char* s, int len) {
  static_cast<ParseState*>(data)->pending_text.append(s, static_cast<std::size_t>(len));
}

}  // namespace

DataTree parse_xml(std::string_view text) {
  ParseState st;
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate("UTF-8"), &XML_ParserFree);
  st.parser = parser.get();
  XML_SetUserData(st.parser, &st);
  XML_SetElementHandler(st.parser, on_start, on_end);
  XML_SetCharacterDataHandler(st.parser, on_text);
  if (XML_Parse(st.parser, text.data(), static_cast<int>(text.size()), XML_TRUE) == XML_STATUS_ERROR) {
    throw Error(ErrorCode::MalformedXml,
                "line " + std::to_string(XML_GetCurrentLineNumber(st.parser)) + ", column " +
                    std::to_string(XML_GetCurrentColumnNumber(st.parser)) + ": " +
                    XML_ErrorString(XML_GetErrorCode(st.parser)));
  }
  st.tree.finish();
  return std::move(st.tree);
}

std::shared_ptr<const DataTree> parse_xml_shared(std::string_view text) {
  return std::make_shared<const DataTree>(parse_xml(text));
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

namespace {

void write_node(const DataTree& t, NodeId id, std::string& out) {
  const Node& n = t.node(id);
  if (n.kind == NodeKind::Text) {
    out += xml_escape(n.value);
    return;
  }
  out += "<" + n.name;
  bool has_content = false;
  for (NodeId c : n.children) {
    const Node& child = t.node(c);
    if (child.kind == NodeKind::Attribute) {
      out += " " + child.name + "=\"" + xml_escape(child.value) + "\"";
    } else {
      has_content = true;
    }
  }
  if (!has_content) {
    out += "/>";
    return;
  }
  out += ">";
  for (NodeId c : n.children) {
    if (t.node(c).kind != NodeKind::Attribute) write_node(t, c, out);
  }
  out += "</" + n.name + ">";
}

}  // namespace

std::string to_xml(const TreeRef& ref) {
  std::string out;
  if (ref.tree && !ref.tree->empty()) write_node(*ref.tree, ref.root, out);
  return out;
}

}  // namespace xolap

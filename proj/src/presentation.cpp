#include "xolap/presentation.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

#include "xolap/xml.hpp"

namespace xolap {

std::optional<Format> parse_format(std::string_view text) noexcept {
  if (text == "xml") return Format::Xml;
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  return std::nullopt;
}

namespace {

std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::size_t rank_of(const AxisLayout& axis, const std::string& member) {
  if (member == kAllMember) return axis.members.size() + 1;
  auto it = std::find(axis.members.begin(), axis.members.end(), member);
  return static_cast<std::size_t>(it - axis.members.begin());
}

std::vector<Coordinate> ordered_headers(const std::vector<Cell>& cells, const std::vector<AxisLayout>& axes,
                                        std::size_t from, std::size_t to) {
  std::set<Coordinate> distinct;
  for (const auto& c : cells) distinct.insert(Coordinate(c.coord.begin() + from, c.coord.begin() + to));
  if (from == to) distinct.insert(Coordinate{});
  std::vector<Coordinate> out(distinct.begin(), distinct.end());
  std::stable_sort(out.begin(), out.end(), [&](const Coordinate& a, const Coordinate& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto ra = rank_of(axes[from + i], a[i]);
      const auto rb = rank_of(axes[from + i], b[i]);
      if (ra != rb) return ra < rb;
    }
    return false;
  });
  return out;
}

std::string join(const Coordinate& c, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? std::string(sep) : "") + c[i];
  return out;
}

std::string axes_json(const std::vector<AxisLayout>& axes) {
  std::string out = "[";
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const auto& a = axes[i];
    out += (i ? "," : "") + std::string("{\"dimension\":") + json_string(a.dimension) +
           ",\"level\":" + json_string(a.level) + ",\"pulled\":" + (a.pulled ? "true" : "false") + ",\"members\":[";
    for (std::size_t m = 0; m < a.members.size(); ++m) out += (m ? "," : "") + json_string(a.members[m]);
    out += "]}";
  }
  return out + "]";
}

std::string measures_json(const std::vector<MeasureColumn>& measures) {
  std::string out = "[";
  for (std::size_t i = 0; i < measures.size(); ++i) {
    out += (i ? "," : "") + std::string("{\"name\":") + json_string(measures[i].name) +
           ",\"aggregate\":" + json_string(to_string(measures[i].fn)) + "}";
  }
  return out + "]";
}

std::string values_json(const std::vector<MeasureColumn>& measures, const std::vector<Decimal>& values) {
  std::string out = "{";
  for (std::size_t i = 0; i < measures.size(); ++i) {
    out += (i ? "," : "") + json_string(measures[i].name) + ":" + values[i].str();
  }
  return out + "}";
}

std::string coord_json(const Coordinate& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + json_string(c[i]);
  return out + "]";
}

std::string axes_xml(const char* tag, const std::vector<AxisLayout>& axes) {
  std::string out = std::string("  <") + tag + ">\n";
  for (const auto& a : axes) {
    out += "    <axis dimension=\"" + xml_escape(a.dimension) + "\" level=\"" + xml_escape(a.level) + "\"/>\n";
  }
  return out + "  </" + tag + ">\n";
}

}  // namespace

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

PivotTable to_pivot(const CubeView& view, std::size_t split) {
  if (split > view.axes.size()) {
    throw Error(ErrorCode::InvalidSplit, "split " + std::to_string(split) + " exceeds axis count " +
                                             std::to_string(view.axes.size()));
  }
  const std::size_t n = view.axes.size();
  PivotTable pivot;
  pivot.row_axes.assign(view.axes.begin(), view.axes.begin() + static_cast<std::ptrdiff_t>(split));
  pivot.column_axes.assign(view.axes.begin() + static_cast<std::ptrdiff_t>(split), view.axes.end());
  pivot.measures = view.measures;
  pivot.row_headers = ordered_headers(view.cells, view.axes, 0, split);
  pivot.column_headers = ordered_headers(view.cells, view.axes, split, n);
  std::map<Coordinate, std::size_t> row_index;
  std::map<Coordinate, std::size_t> col_index;
  for (std::size_t i = 0; i < pivot.row_headers.size(); ++i) row_index[pivot.row_headers[i]] = i;
  for (std::size_t i = 0; i < pivot.column_headers.size(); ++i) col_index[pivot.column_headers[i]] = i;
  pivot.body.assign(pivot.row_headers.size(),
                    std::vector<std::optional<std::vector<Decimal>>>(pivot.column_headers.size()));
  for (const auto& c : view.cells) {
    const Coordinate row(c.coord.begin(), c.coord.begin() + static_cast<std::ptrdiff_t>(split));
    const Coordinate col(c.coord.begin() + static_cast<std::ptrdiff_t>(split), c.coord.end());
    pivot.body[row_index.at(row)][col_index.at(col)] = c.values;
  }
  return pivot;
}

std::string serialize(const CubeView& view, Format format) {
  std::string out;
  switch (format) {
    case Format::Xml: {
      if (view.cells.empty()) return "<result/>\n";
      out = "<result>\n";
      for (const auto& c : view.cells) {
        out += "  <cell>\n";
        for (std::size_t i = 0; i < view.axes.size(); ++i) {
          out += "    <coord dimension=\"" + xml_escape(view.axes[i].dimension) + "\" level=\"" +
                 xml_escape(view.axes[i].level) + "\" member=\"" + xml_escape(c.coord[i]) + "\"/>\n";
        }
        for (std::size_t m = 0; m < view.measures.size(); ++m) {
          out += "    <measure name=\"" + xml_escape(view.measures[m].name) + "\" value=\"" + c.values[m].str() +
                 "\"/>\n";
        }
        out += "  </cell>\n";
      }
      return out + "</result>\n";
    }
    case Format::Csv: {
      std::vector<std::string> header;
      for (const auto& a : view.axes) header.push_back(csv_field(a.dimension));
      for (const auto& m : view.measures) header.push_back(csv_field(m.name));
      out = join(header, ",") + "\n";
      for (const auto& c : view.cells) {
        std::vector<std::string> row;
        for (const auto& m : c.coord) row.push_back(csv_field(m));
        for (const auto& v : c.values) row.push_back(v.str());
        out += join(row, ",") + "\n";
      }
      return out;
    }
    case Format::Json: {
      out = "{\"fact\":" + json_string(view.fact_class) + ",\"axes\":" + axes_json(view.axes) +
            ",\"measures\":" + measures_json(view.measures) + ",\"cells\":[";
      for (std::size_t i = 0; i < view.cells.size(); ++i) {
        out += (i ? "," : "") + std::string("{\"coord\":") + coord_json(view.cells[i].coord) +
               ",\"values\":" + values_json(view.measures, view.cells[i].values) + "}";
      }
      return out + "]}\n";
    }
  }
  return out;
}

std::string serialize(const PivotTable& pivot, Format format) {
  std::string out;
  switch (format) {
    case Format::Xml: {
      out = "<pivot>\n" + axes_xml("row-axes", pivot.row_axes) + axes_xml("column-axes", pivot.column_axes);
      out += "  <columns>\n";
      for (const auto& col : pivot.column_headers) {
        out += "    <column>";
        for (const auto& m : col) out += "<member id=\"" + xml_escape(m) + "\"/>";
        out += "</column>\n";
      }
      out += "  </columns>\n";
      for (std::size_t r = 0; r < pivot.row_headers.size(); ++r) {
        out += "  <row>";
        for (const auto& m : pivot.row_headers[r]) out += "<member id=\"" + xml_escape(m) + "\"/>";
        for (std::size_t c = 0; c < pivot.column_headers.size(); ++c) {
          const auto& entry = pivot.body[r][c];
          if (!entry) {
            out += "<entry column=\"" + std::to_string(c) + "\"/>";
            continue;
          }
          out += "<entry column=\"" + std::to_string(c) + "\">";
          for (std::size_t m = 0; m < pivot.measures.size(); ++m) {
            out += "<measure name=\"" + xml_escape(pivot.measures[m].name) + "\" value=\"" + (*entry)[m].str() +
                   "\"/>";
          }
          out += "</entry>";
        }
        out += "</row>\n";
      }
      return out + "</pivot>\n";
    }
    case Format::Csv: {
      std::vector<std::string> header;
      for (const auto& a : pivot.row_axes) header.push_back(csv_field(a.dimension));
      const bool many = pivot.measures.size() > 1;
      for (const auto& col : pivot.column_headers) {
        for (const auto& m : pivot.measures) {
          std::string label = col.empty() ? m.name : join(col, "/") + (many ? ":" + m.name : "");
          header.push_back(csv_field(label));
        }
      }
      out = join(header, ",") + "\n";
      for (std::size_t r = 0; r < pivot.row_headers.size(); ++r) {
        std::vector<std::string> row;
        for (const auto& m : pivot.row_headers[r]) row.push_back(csv_field(m));
        for (std::size_t c = 0; c < pivot.column_headers.size(); ++c) {
          for (std::size_t m = 0; m < pivot.measures.size(); ++m) {
            row.push_back(pivot.body[r][c] ? (*pivot.body[r][c])[m].str() : "");
          }
        }
        out += join(row, ",") + "\n";
      }
      return out;
    }
    case Format::Json: {
      out = "{\"row_axes\":" + axes_json(pivot.row_axes) + ",\"column_axes\":" + axes_json(pivot.column_axes) +
            ",\"measures\":" + measures_json(pivot.measures) + ",\"rows\":[";
      for (std::size_t i = 0; i < pivot.row_headers.size(); ++i) out += (i ? "," : "") + coord_json(pivot.row_headers[i]);
      out += "],\"columns\":[";
      for (std::size_t i = 0; i < pivot.column_headers.size(); ++i) {
        out += (i ? "," : "") + coord_json(pivot.column_headers[i]);
      }
      out += "],\"body\":[";
      for (std::size_t r = 0; r < pivot.body.size(); ++r) {
        out += r ? ",[" : "[";
        for (std::size_t c = 0; c < pivot.body[r].size(); ++c) {
          out += c ? "," : "";
          out += pivot.body[r][c] ? values_json(pivot.measures, *pivot.body[r][c]) : "null";
        }
        out += "]";
      }
      return out + "]}\n";
    }
  }
  return out;
}

CellSet cell_set(const CubeView& view) {
  CellSet out;
  for (const auto& c : view.cells) {
    auto& measures = out[c.coord];
    for (std::size_t m = 0; m < view.measures.size(); ++m) measures.emplace(view.measures[m].name, c.values[m]);
  }
  return out;
}

CellSet parse_result_xml(std::string_view xml) {
  auto excerpt = [&] { return std::string(xml.substr(0, 200)); };
  DataTree tree;
  try {
    tree = parse_xml(xml);
  } catch (const Error& e) {
    throw Error(ErrorCode::OutputParseError, std::string(e.what()) + " in output: " + excerpt());
  }
  if (tree.node(tree.root()).name != "result") {
    throw Error(ErrorCode::OutputParseError, "expected a result element, got: " + excerpt());
  }
  CellSet out;
  for (NodeId cell : tree.child_elements(tree.root())) {
    if (tree.node(cell).name != "cell") {
      throw Error(ErrorCode::OutputParseError, "unexpected element " + tree.node(cell).name + " in: " + excerpt());
    }
    Coordinate coord;
    std::map<std::string, Decimal> measures;
    for (NodeId child : tree.child_elements(cell)) {
      const std::string& tag = tree.node(child).name;
      if (tag == "coord") {
        auto member = tree.attribute(child, "member");
        if (!member) throw Error(ErrorCode::OutputParseError, "coord without @member in: " + excerpt());
        coord.emplace_back(*member);
      } else if (tag == "measure") {
        auto name = tree.attribute(child, "name");
        auto value = Decimal::parse(tree.attribute(child, "value").value_or(""));
        if (!name || !value) throw Error(ErrorCode::OutputParseError, "bad measure element " + tree.path(child) + " (value \"" + std::string(tree.attribute(child, "value").value_or("")) + "\") in: " + excerpt());
        measures.emplace(std::string(*name), *value);
      } else {
        throw Error(ErrorCode::OutputParseError, "unexpected element " + tag + " in: " + excerpt());
      }
    }
    if (!out.emplace(std::move(coord), std::move(measures)).second) {
      throw Error(ErrorCode::OutputParseError, "duplicate cell coordinate in: " + excerpt());
    }
  }
  return out;
}

}  // namespace xolap

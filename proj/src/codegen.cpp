#include "xolap/codegen.hpp"

#include <algorithm>
#include <map>

#include "xolap/xml.hpp"

namespace xolap {

std::string_view to_string(QueryDialect d) noexcept { return d == QueryDialect::Xq31 ? "xq31" : "xq10"; }

std::optional<QueryDialect> parse_dialect(std::string_view text) noexcept {
  if (text == "xq31") return QueryDialect::Xq31;
  if (text == "xq10") return QueryDialect::Xq10;
  return std::nullopt;
}

namespace {

// XQuery string literal.
std::string lit(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\"\""; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

// Literal text inside a direct attribute constructor.
std::string attr_text(std::string_view s) {
  std::string out;
  for (char c : xml_escape(s)) {
    if (c == '{' || c == '}') out += c;
    out += c;
  }
  return out;
}

constexpr std::string_view kProlog = R"(declare function local:member($dim as element(dimension), $id as xs:string) as element(instance)? {
  ($dim/Level/instance[@id = $id])[1]
};

declare function local:ancestor($dim as element(dimension), $levels as xs:string*, $id as xs:string,
                                $target as xs:string) as xs:string {
  if ($id = "__unknown__") then "__unknown__"
  else
    let $m := local:member($dim, $id)
    return
      if (empty($m)) then error(xs:QName("local:dangling"), concat("unknown member ", $id))
      else if (string($m/../@id) = $target) then $id
      else if (index-of($levels, string($m/../@id))[1] gt index-of($levels, $target)[1] or empty($m/parent))
      then "__unassigned__"
      else local:ancestor($dim, $levels, string($m/parent[1]/@idref), $target)
};

declare function local:ref($fact as element(fact), $dim as xs:string) as xs:string {
  let $r := $fact/dimension[@idref = $dim]
  return if (empty($r)) then "__unknown__" else string($r[1]/@value-id)
};

declare function local:attr($dim as element(dimension), $levels as xs:string*, $fact as element(fact),
                            $dim-id as xs:string, $level as xs:string, $name as xs:string) as xs:decimal {
  let $owner := local:ancestor($dim, $levels, local:ref($fact, $dim-id), $level)
  let $v := local:member($dim, $owner)/attribute[@name = $name]/@value
  return if (empty($v)) then 0 else xs:decimal($v[1])
};

(: Mean rounded half-down to 18 fractional digits, computed on integers so
   it does not depend on the processor's decimal division precision. :)
declare function local:avg($values as xs:decimal*) as xs:decimal {
  let $n := count($values)
  let $s := xs:integer(sum($values) * 1000000000000000000)
  let $q := $s idiv $n
  let $r := $s - $q * $n
  let $rounded := if (2 * abs($r) gt $n) then $q + (if ($r lt 0) then -1 else 1) else $q
  return $rounded div 1000000000000000000
};
)";

class Generator {
 public:
  Generator(const QueryState& state, const WarehouseSchema& schema, QueryDialect dialect)
      : state_(state), schema_(schema), dialect_(dialect) {
    fact_ = schema.find_fact(state.fact_class);
    if (fact_ == nullptr) throw Error(ErrorCode::UnknownFactClass, "unknown fact class '" + state.fact_class + "'");
    // Bind every dimension the state mentions, in schema order.
    auto mention = [&](const std::string& d) { used_.emplace(d, 0); };
    for (const auto& p : state.predicates) mention(p.dimension);
    for (const auto& a : state.axes) {
      if (!a.is_pulled()) mention(a.dimension);
      if (a.pulled && a.pulled->source == MeasureSource::PushedAttribute) mention(a.pulled->dimension);
    }
    for (const auto& m : state.measures) {
      if (m.source == MeasureSource::PushedAttribute) mention(m.dimension);
    }
    int n = 0;
    for (const auto& d : schema.dimensions) {
      if (auto it = used_.find(d.id); it != used_.end()) it->second = ++n;
    }
  }

  GeneratedQuery run() {
    GeneratedQuery q;
    q.dialect = dialect_;
    std::string& t = q.text;
    t += dialect_ == QueryDialect::Xq31 ? "xquery version \"3.1\";\n" : "xquery version \"1.0\";\n";
    t += "(: fact class " + state_.fact_class + ", dialect " + std::string(to_string(dialect_)) + " :)\n\n";
    t += kProlog;
    t += "\n";
    for (const auto& d : schema_.dimensions) {
      auto it = used_.find(d.id);
      if (it == used_.end()) continue;
      const std::string n = std::to_string(it->second);
      t += "let $dim" + n + " := doc(" + lit(d.document_path) + ")/dimension\n";
      t += "let $levels" + n + " := (";
      for (std::size_t i = 0; i < d.levels.size(); ++i) t += (i ? ", " : "") + lit(d.levels[i].id);
      t += ")\n";
      q.documents.push_back(d.document_path);
    }
    q.documents.push_back(fact_->document_path);
    t += "let $facts := doc(" + lit(fact_->document_path) + ")/FactDoc/fact\n";
    t += "let $selected := $facts";
    for (const auto& p : state_.predicates) {
      t += "[" + ancestor_expr(p.dimension, p.level, ".") + " = (";
      for (std::size_t i = 0; i < p.members.size(); ++i) t += (i ? ", " : "") + lit(p.members[i]);
      t += ")]";
    }
    t += "\nreturn\n  <result>{\n";
    const auto groupings = collapse_masks();
    for (std::size_t g = 0; g < groupings.size(); ++g) {
      t += g ? ",\n" : "";
      t += block(groupings[g]);
    }
    t += "\n  }</result>\n";
    return q;
  }

 private:
  std::string dim_var(const std::string& d) const { return "$dim" + std::to_string(used_.at(d)); }
  std::string levels_var(const std::string& d) const { return "$levels" + std::to_string(used_.at(d)); }

  std::string ancestor_expr(const std::string& dimension, const std::string& level, const std::string& fact) const {
    return "local:ancestor(" + dim_var(dimension) + ", " + levels_var(dimension) + ", local:ref(" + fact + ", " +
           lit(dimension) + "), " + lit(level) + ")";
  }

  // Per-fact value of a measure as xs:decimal.
  std::string value_expr(const MeasureRef& m, const std::string& fact) const {
    switch (m.source) {
      case MeasureSource::Native: return "xs:decimal(" + fact + "/measure[@name = " + lit(m.name) + "][1]/@value)";
      case MeasureSource::ImplicitCount: return "xs:decimal(1)";
      case MeasureSource::PushedAttribute:
        return "local:attr(" + dim_var(m.dimension) + ", " + levels_var(m.dimension) + ", " + fact + ", " +
               lit(m.dimension) + ", " + lit(m.level) + ", " + lit(m.attribute) + ")";
    }
    return "0";
  }

  std::string key_expr(const Axis& axis, const std::string& fact) const {
    if (axis.is_pulled()) return "string(" + value_expr(*axis.pulled, fact) + ")";
    return ancestor_expr(axis.dimension, axis.level, fact);
  }

  std::string aggregate_expr(const MeasureRef& m, const std::string& group) const {
    const std::string values = "for $x in " + group + " return " + value_expr(m, "$x");
    switch (m.fn) {
      case AggregateFn::Sum: return "sum(" + values + ")";
      case AggregateFn::Count: return "count(" + group + ")";
      case AggregateFn::Min: return "min(" + values + ")";
      case AggregateFn::Max: return "max(" + values + ")";
      case AggregateFn::Avg: return "local:avg(" + values + ")";
    }
    return "0";
  }

  std::vector<std::vector<bool>> collapse_masks() const {
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

  std::string cell(const std::vector<bool>& collapsed, const std::string& group, const std::string& indent) const {
    std::string t = indent + "<cell>{\n";
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < state_.axes.size(); ++i) {
      const Axis& a = state_.axes[i];
      const std::string member = collapsed[i] ? std::string(kAllMember) : "{$k" + std::to_string(i + 1) + "}";
      parts.push_back(indent + "  <coord dimension=\"" + attr_text(a.dimension) + "\" level=\"" +
                      attr_text(a.level) + "\" member=\"" + member + "\"/>");
    }
    for (const auto& m : state_.measures) {
      parts.push_back(indent + "  <measure name=\"" + attr_text(m.name) + "\" value=\"{" +
                      aggregate_expr(m, group) + "}\"/>");
    }
    for (std::size_t i = 0; i < parts.size(); ++i) t += parts[i] + (i + 1 < parts.size() ? ",\n" : "\n");
    return t + indent + "}</cell>";
  }

  std::string block(const std::vector<bool>& collapsed) const {
    std::vector<std::size_t> keys;
    for (std::size_t i = 0; i < state_.axes.size(); ++i) {
      if (!collapsed[i]) keys.push_back(i);
    }
    const std::string in = "    ";
    std::string t = in + "(\n";
    if (keys.empty()) {
      t += in + "  let $g := $selected\n" + in + "  where exists($g)\n" + in + "  return\n";
      t += cell(collapsed, "$g", in + "    ");
      return t + "\n" + in + ")";
    }
    if (dialect_ == QueryDialect::Xq31) {
      t += in + "  for $f in $selected\n";
      for (std::size_t k : keys) {
        t += in + "  let $k" + std::to_string(k + 1) + " := " + key_expr(state_.axes[k], "$f") + "\n";
      }
      t += in + "  group by ";
      for (std::size_t i = 0; i < keys.size(); ++i) t += (i ? ", " : "") + std::string("$k") + std::to_string(keys[i] + 1);
      t += "\n" + in + "  return\n";
      t += cell(collapsed, "$f", in + "    ");
      return t + "\n" + in + ")";
    }
    // xq10: nest one loop per key over the distinct values present among
    // the facts that agree on all outer keys.
    std::string agree;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const std::string var = "$k" + std::to_string(keys[i] + 1);
      const std::string scope =
          agree.empty() ? "$selected" : "(for $f in $selected where " + agree + " return $f)";
      t += in + "  for " + var + " in distinct-values(for $f in " + scope + " return " +
           key_expr(state_.axes[keys[i]], "$f") + ")\n";
      agree += (agree.empty() ? "" : " and ") + key_expr(state_.axes[keys[i]], "$f") + " = " + var;
    }
    t += in + "  let $g := for $f in $selected where " + agree + " return $f\n" + in + "  return\n";
    t += cell(collapsed, "$g", in + "    ");
    return t + "\n" + in + ")";
  }

  const QueryState& state_;
  const WarehouseSchema& schema_;
  QueryDialect dialect_;
  const FactSpec* fact_ = nullptr;
  std::map<std::string, int> used_;
};

}  // namespace

GeneratedQuery compile(const QueryState& state, const WarehouseSchema& schema, QueryDialect dialect) {
  return Generator(state, schema, dialect).run();
}

}  // namespace xolap

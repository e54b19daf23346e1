#include "xolap/pipeline.hpp"

namespace xolap {
namespace {

using nlohmann::json;

struct OpReader {
  const json& op;
  std::size_t index;

  [[noreturn]] void fail(const std::string& message) const {
    throw PipelineError(ErrorCode::InvalidPipeline, "op " + std::to_string(index) + ": " + message, index);
  }

  const json& field(const char* name) const {
    auto it = op.find(name);
    if (it == op.end()) fail(std::string("missing field \"") + name + "\"");
    return *it;
  }

  std::string str(const char* name) const {
    const json& v = field(name);
    if (!v.is_string()) fail(std::string("field \"") + name + "\" must be a string");
    return v.get<std::string>();
  }

  std::vector<std::string> strings(const json& v, const char* name) const {
    if (!v.is_array()) fail(std::string("field \"") + name + "\" must be an array");
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) fail(std::string("field \"") + name + "\" must contain strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  std::vector<std::string> strings(const char* name) const { return strings(field(name), name); }

  const json& array(const char* name) const {
    const json& v = field(name);
    if (!v.is_array()) fail(std::string("field \"") + name + "\" must be an array");
    return v;
  }
};

QueryState apply_base(const WarehouseInstance& instance, const OpReader& r) {
  std::vector<AxisSpec> axes;
  for (const auto& a : r.array("axes")) {
    if (!a.is_object() || !a.contains("dimension") || !a.contains("level") || !a["dimension"].is_string() ||
        !a["level"].is_string()) {
      r.fail("each axis needs string fields \"dimension\" and \"level\"");
    }
    axes.push_back(AxisSpec{a["dimension"].get<std::string>(), a["level"].get<std::string>()});
  }
  std::optional<std::vector<MeasureOverride>> measures;
  if (r.op.contains("measures")) {
    measures.emplace();
    for (const auto& m : r.array("measures")) {
      if (!m.is_object() || !m.contains("name") || !m["name"].is_string()) {
        r.fail("each measure needs a string field \"name\"");
      }
      MeasureOverride o{m["name"].get<std::string>(), std::nullopt};
      if (m.contains("aggregate")) {
        auto fn = m["aggregate"].is_string() ? parse_aggregate_fn(m["aggregate"].get<std::string>()) : std::nullopt;
        if (!fn) r.fail("unknown aggregate for measure \"" + o.name + "\"");
        o.fn = fn;
      }
      measures->push_back(std::move(o));
    }
  }
  return base(instance, r.str("fact"), axes, measures);
}

QueryState apply(const WarehouseInstance& instance, QueryState state, const OpReader& r, const std::string& name) {
  if (name == "slice") return slice(instance, std::move(state), r.str("dimension"), r.str("level"), r.str("member"));
  if (name == "dice") {
    std::vector<Predicate> predicates;
    for (const auto& p : r.array("predicates")) {
      if (!p.is_object() || !p.contains("dimension") || !p.contains("level") || !p.contains("members") ||
          !p["dimension"].is_string() || !p["level"].is_string()) {
        r.fail("each predicate needs \"dimension\", \"level\" and \"members\"");
      }
      predicates.push_back(Predicate{p["dimension"].get<std::string>(), p["level"].get<std::string>(),
                                     r.strings(p["members"], "members")});
    }
    return dice(instance, std::move(state), predicates);
  }
  if (name == "rollup") return roll_up(instance, std::move(state), r.str("dimension"), r.str("level"));
  if (name == "drilldown") return drill_down(instance, std::move(state), r.str("dimension"), r.str("level"));
  if (name == "rotate") {
    std::vector<std::size_t> permutation;
    for (const auto& p : r.array("permutation")) {
      if (!p.is_number_unsigned()) r.fail("\"permutation\" must contain non-negative integers");
      permutation.push_back(p.get<std::size_t>());
    }
    return rotate(std::move(state), permutation);
  }
  if (name == "switch") return switch_members(std::move(state), r.str("dimension"), r.strings("order"));
  if (name == "push") {
    return push(instance, std::move(state), r.str("dimension"), r.str("level"), r.str("attribute"));
  }
  if (name == "pull") return pull(std::move(state), r.str("measure"));
  if (name == "cube") return cube(std::move(state), r.strings("axes"));
  if (name == "base") r.fail("\"base\" may only appear as the first op");
  r.fail("unknown op \"" + name + "\"");
}

}  // namespace

QueryState run_pipeline(const WarehouseInstance& instance, const json& ops) {
  if (!ops.is_array() || ops.empty()) {
    throw PipelineError(ErrorCode::InvalidPipeline, "pipeline must be a non-empty array of ops", std::nullopt);
  }
  QueryState state;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const json& op = ops[i];
    OpReader reader{op, i};
    if (!op.is_object()) reader.fail("op must be an object");
    const std::string name = reader.str("op");
    if (i == 0 && name != "base") reader.fail("the first op must be \"base\"");
    try {
      state = i == 0 ? apply_base(instance, reader) : apply(instance, std::move(state), reader, name);
    } catch (const PipelineError&) {
      throw;
    } catch (const Error& e) {
      throw PipelineError(e.code(), "op " + std::to_string(i) + " (" + name + "): " + e.what(), i);
    }
  }
  return state;
}

QueryState run_pipeline(const WarehouseInstance& instance, std::string_view json_text) {
  json ops;
  try {
    ops = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw PipelineError(ErrorCode::InvalidPipeline,
                        "malformed pipeline JSON at byte " + std::to_string(e.byte) + ": " + e.what(), std::nullopt);
  }
  return run_pipeline(instance, ops);
}

}  // namespace xolap

#include "xolap/api.hpp"

#include <httplib.h>
#include <json.hpp>

#include "xolap/codegen.hpp"
#include "xolap/pipeline.hpp"
#include "xolap/presentation.hpp"

namespace xolap {
namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json; charset=utf-8";

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message,
                std::optional<std::size_t> op_index = std::nullopt) {
  json body{{"code", code}, {"message", message}, {"op_index", nullptr}};
  if (op_index) body["op_index"] = *op_index;
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_pipeline_error(httplib::Response& res, const PipelineError& e) {
  send_error(res, 400, to_string(e.code()), e.what(), e.op_index());
}

// Request body: a bare pipeline array, or {"pipeline": [...], "dialect": ...}.
json pipeline_of(const json& body) { return body.is_object() && body.contains("pipeline") ? body["pipeline"] : body; }

json parse_body(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw PipelineError(ErrorCode::InvalidPipeline,
                        "malformed pipeline JSON at byte " + std::to_string(e.byte) + ": " + e.what(), std::nullopt);
  }
}

}  // namespace

std::string schema_json(const WarehouseSchema& schema) {
  json dims = json::array();
  for (const auto& d : schema.dimensions) {
    json levels = json::array();
    for (const auto& l : d.levels) {
      json attrs = json::array();
      for (const auto& a : l.attributes) attrs.push_back({{"name", a.name}, {"type", to_string(a.type)}, {"key", a.key}});
      levels.push_back({{"id", l.id}, {"depth", l.depth}, {"attributes", attrs}});
    }
    dims.push_back({{"id", d.id}, {"levels", levels}});
  }
  json facts = json::array();
  for (const auto& f : schema.fact_classes) {
    json measures = json::array();
    for (const auto& m : f.measures) {
      measures.push_back({{"name", m.name}, {"type", to_string(m.type)}, {"aggregate", to_string(m.aggregate)}});
    }
    facts.push_back({{"id", f.id}, {"measures", measures}, {"dimensions", f.dimension_links}});
  }
  return json{{"dimensions", dims}, {"fact_classes", facts}}.dump();
}

void install_routes(httplib::Server& server, std::shared_ptr<const WarehouseInstance> instance) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});

  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });

  const std::string schema_body = schema_json(instance->schema());
  server.Get("/api/schema", [schema_body](const httplib::Request&, httplib::Response& res) {
    res.set_content(schema_body, kJson);
  });

  server.Get(R"(/api/dimensions/([^/]+)/members)", [instance](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const DimensionSpec* spec = instance->schema().find_dimension(id);
    if (spec == nullptr) return send_error(res, 404, "UnknownDimension", "unknown dimension '" + id + "'");
    if (!req.has_param("level")) return send_error(res, 400, "InvalidRequest", "missing query parameter 'level'");
    const std::string level = req.get_param_value("level");
    if (spec->find_level(level) == nullptr) {
      return send_error(res, 404, "UnknownLevel", "dimension '" + id + "' has no level '" + level + "'");
    }
    const DimensionTable& table = instance->dimension(id);
    json members = json::array();
    for (const auto& member_id : table.members_at(level)) {
      const DimensionMember& m = table.member(member_id);
      json entry{{"id", m.member_id}, {"attributes", m.attribute_values}, {"parent", nullptr}};
      if (m.parent) entry["parent"] = {{"level", m.parent->level_id}, {"id", m.parent->member_id}};
      members.push_back(std::move(entry));
    }
    res.set_content(json{{"dimension", id}, {"level", level}, {"members", members}}.dump(), kJson);
  });

  server.Post("/api/query", [instance](const httplib::Request& req, httplib::Response& res) {
    Format format = Format::Json;
    if (req.has_param("format")) {
      auto f = parse_format(req.get_param_value("format"));
      if (!f) return send_error(res, 400, "InvalidRequest", "format must be xml, csv or json");
      format = *f;
    }
    try {
      const QueryState state = run_pipeline(*instance, pipeline_of(parse_body(req.body)));
      const CubeView view = evaluate(*instance, state);
      const char* type = format == Format::Json ? kJson : (format == Format::Csv ? "text/csv" : "application/xml");
      res.set_content(serialize(view, format), type);
    } catch (const PipelineError& e) {
      send_pipeline_error(res, e);
    } catch (const Error& e) {
      send_error(res, 400, to_string(e.code()), e.what());
    }
  });

  server.Post("/api/compile", [instance](const httplib::Request& req, httplib::Response& res) {
    try {
      const json body = parse_body(req.body);
      std::string dialect_text = "xq31";
      if (body.is_object() && body.contains("dialect")) {
        dialect_text = body["dialect"].is_string() ? body["dialect"].get<std::string>() : "";
      } else if (req.has_param("dialect")) {
        dialect_text = req.get_param_value("dialect");
      }
      auto dialect = parse_dialect(dialect_text);
      if (!dialect) return send_error(res, 400, "InvalidRequest", "dialect must be xq31 or xq10");
      const QueryState state = run_pipeline(*instance, pipeline_of(body));
      const GeneratedQuery q = compile(state, instance->schema(), *dialect);
      res.set_content(json{{"xquery", q.text}, {"dialect", to_string(q.dialect)}, {"documents", q.documents}}.dump(),
                      kJson);
    } catch (const PipelineError& e) {
      send_pipeline_error(res, e);
    } catch (const Error& e) {
      send_error(res, 400, to_string(e.code()), e.what());
    }
  });

  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) send_error(res, 404, "NotFound", "no route for " + req.path);
  });
}

}  // namespace xolap

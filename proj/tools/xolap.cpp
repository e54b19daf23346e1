// Command-line entry point: validate, query, compile, explain, gen-sample, serve.
#include <CLI11.hpp>
#include <httplib.h>

#include <iostream>
#include <optional>

#include "xolap/api.hpp"
#include "xolap/codegen.hpp"
#include "xolap/pipeline.hpp"
#include "xolap/presentation.hpp"
#include "xolap/sample.hpp"

namespace {

using namespace xolap;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kMalformed = 2;
constexpr int kNoProcessor = 3;

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n') c = ' ';
  }
  return text;
}

int report(const Error& e) {
  std::cerr << "error: " << to_string(e.code()) << ": " << one_line(e.what()) << "\n";
  return e.code() == ErrorCode::MalformedXml ? kMalformed : kFailure;
}

int cmd_validate(const std::string& dir) {
  try {
    const auto diags = validate_warehouse(dir);
    for (const auto& d : diags) std::cerr << d.str() << "\n";
    return diags.empty() ? kOk : kFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return kMalformed;
  }
}

std::optional<QueryState> load_pipeline(const WarehouseInstance& instance, const std::string& file, int& status) {
  std::string text;
  try {
    text = read_file(file);
  } catch (const Error&) {
    std::cerr << "error: cannot read pipeline file " << file << "\n";
    status = kFailure;
    return std::nullopt;
  }
  try {
    return run_pipeline(instance, std::string_view(text));
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << one_line(e.what()) << "\n";
    status = kFailure;
    return std::nullopt;
  }
}

std::string cells_xml(const CellSet& cells, const QueryState& state) {
  if (cells.empty()) return "<result/>\n";
  std::string out = "<result>\n";
  for (const auto& [coord, measures] : cells) {
    out += "  <cell>\n";
    for (std::size_t i = 0; i < coord.size() && i < state.axes.size(); ++i) {
      out += "    <coord dimension=\"" + xml_escape(state.axes[i].dimension) + "\" level=\"" +
             xml_escape(state.axes[i].level) + "\" member=\"" + xml_escape(coord[i]) + "\"/>\n";
    }
    for (const auto& [name, value] : measures) {
      out += "    <measure name=\"" + xml_escape(name) + "\" value=\"" + value.str() + "\"/>\n";
    }
    out += "  </cell>\n";
  }
  return out + "</result>\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XML-native OLAP warehouse engine"};
  app.require_subcommand(1);

  std::string dir;
  std::string pipeline_file;
  std::string format_text = "xml";
  std::string dialect_text = "xq31";
  bool run = false;
  int port = 8080;
  std::uint64_t seed = 1;
  std::optional<std::size_t> facts;
  double ragged = 0.1;
  double missing = 0.05;

  auto* validate = app.add_subcommand("validate", "check a warehouse directory");
  validate->add_option("dir", dir, "warehouse directory")->required();

  auto* query = app.add_subcommand("query", "evaluate a pipeline");
  query->add_option("dir", dir, "warehouse directory")->required();
  query->add_option("pipeline", pipeline_file, "pipeline JSON file")->required();
  query->add_option("--format", format_text, "xml|csv|json")->check(CLI::IsMember({"xml", "csv", "json"}));

  auto* compile_cmd = app.add_subcommand("compile", "compile a pipeline to XQuery");
  compile_cmd->add_option("dir", dir, "warehouse directory")->required();
  compile_cmd->add_option("pipeline", pipeline_file, "pipeline JSON file")->required();
  compile_cmd->add_option("--dialect", dialect_text, "xq31|xq10")->check(CLI::IsMember({"xq31", "xq10"}));
  compile_cmd->add_flag("--run", run, "execute through $XOLAP_XQUERY_CMD and print the cells");

  auto* explain_cmd = app.add_subcommand("explain", "print the tree-algebra plan of a pipeline");
  explain_cmd->add_option("dir", dir, "warehouse directory")->required();
  explain_cmd->add_option("pipeline", pipeline_file, "pipeline JSON file")->required();

  auto* gen = app.add_subcommand("gen-sample", "write a sample warehouse");
  gen->add_option("dir", dir, "target directory")->required();
  gen->add_option("--seed", seed, "random seed (with --facts)");
  gen->add_option("--facts", facts, "generate a random warehouse with this many facts");
  gen->add_option("--ragged", ragged, "fraction of members whose parent skips a level")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--missing", missing, "fraction of missing fact references")->check(CLI::Range(0.0, 1.0));

  auto* serve = app.add_subcommand("serve", "serve the HTTP API");
  serve->add_option("dir", dir, "warehouse directory")->required();
  serve->add_option("--port", port, "TCP port");

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return cmd_validate(dir);

  if (gen->parsed()) {
    try {
      WarehouseFiles files;
      if (facts) {
        GeneratorConfig config;
        config.seed = seed;
        config.facts = *facts;
        config.ragged_fraction = ragged;
        config.missing_fraction = missing;
        files = random_warehouse(config);
      } else {
        files = sample_warehouse();
      }
      files.write(dir);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kFailure;
    }
    return kOk;
  }

  std::shared_ptr<const WarehouseInstance> instance;
  try {
    if (serve->parsed()) {
      const auto diags = validate_warehouse(dir);
      for (const auto& d : diags) std::cerr << d.str() << "\n";
      if (!diags.empty()) return kFailure;
    }
    instance = load_warehouse(dir);
  } catch (const Error& e) {
    return serve->parsed() ? kFailure : report(e);
  }

  if (serve->parsed()) {
    httplib::Server server;
    install_routes(server, instance);
    if (!server.bind_to_port("0.0.0.0", port)) {
      std::cerr << "error: cannot bind port " << port << "\n";
      return kFailure;
    }
    std::cerr << "serving " << dir << " on port " << port << "\n";
    server.listen_after_bind();
    return kOk;
  }

  int status = kOk;
  const auto state = load_pipeline(*instance, pipeline_file, status);
  if (!state) return status;

  try {
    if (query->parsed()) {
      std::cout << serialize(evaluate(*instance, *state), *parse_format(format_text));
    } else if (explain_cmd->parsed()) {
      std::cout << explain(*instance, *state);
    } else if (compile_cmd->parsed()) {
      const GeneratedQuery generated = compile(*state, instance->schema(), *parse_dialect(dialect_text));
      if (run) {
        std::cout << cells_xml(run_external(generated, dir), *state);
      } else {
        std::cout << generated.text;
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << one_line(e.what()) << "\n";
    return e.code() == ErrorCode::ProcessorUnavailable ? kNoProcessor : kFailure;
  }
  return kOk;
}

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xolap/algebra.hpp"
#include "xolap/presentation.hpp"
#include "xolap/schema.hpp"

namespace xolap {

// xq31 groups with FLWOR `group by`; xq10 iterates over distinct key values.
enum class QueryDialect { Xq31, Xq10 };

std::string_view to_string(QueryDialect d) noexcept;
std::optional<QueryDialect> parse_dialect(std::string_view text) noexcept;

struct GeneratedQuery {
  std::string text;
  std::vector<std::string> documents;  // doc() URIs, relative to the warehouse directory
  QueryDialect dialect = QueryDialect::Xq31;
};

// Self-contained XQuery producing <result><cell><coord/>...<measure/></cell>...</result>
// with the same cell set as evaluate(). Deterministic for a given (state, dialect).
GeneratedQuery compile(const QueryState& state, const WarehouseSchema& schema, QueryDialect dialect);

inline constexpr const char* kProcessorEnvVar = "XOLAP_XQUERY_CMD";

// Runs the query through an external processor. The command template
// (default: $XOLAP_XQUERY_CMD) may use {query_file} and {base_dir}; the
// processor must print the result element on standard output.
CellSet run_external(const GeneratedQuery& query, const std::filesystem::path& base_dir,
                     std::optional<std::string> command_template = std::nullopt);

}  // namespace xolap

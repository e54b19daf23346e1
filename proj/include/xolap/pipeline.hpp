#pragma once

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "xolap/algebra.hpp"

namespace xolap {

// An operator failure located in a pipeline. op_index is the zero-based
// position of the failing op; empty when the JSON itself is malformed.
class PipelineError : public Error {
 public:
  PipelineError(ErrorCode code, const std::string& message, std::optional<std::size_t> op_index)
      : Error(code, message), op_index_(op_index) {}

  std::optional<std::size_t> op_index() const noexcept { return op_index_; }

 private:
  std::optional<std::size_t> op_index_;
};

// Applies a JSON pipeline (array of op objects, first one "base").
QueryState run_pipeline(const WarehouseInstance& instance, const nlohmann::json& ops);
QueryState run_pipeline(const WarehouseInstance& instance, std::string_view json_text);

}  // namespace xolap

#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "oracle.hpp"
#include "xolap/algebra.hpp"
#include "xolap/pipeline.hpp"
#include "xolap/sample.hpp"

namespace fixtures {

inline const std::shared_ptr<const xolap::WarehouseInstance>& sample() {
  static const auto instance = xolap::load_files(xolap::sample_warehouse());
  return instance;
}

inline xolap::CubeView eval(const xolap::WarehouseInstance& w, const nlohmann::json& pipeline) {
  return xolap::evaluate(w, xolap::run_pipeline(w, pipeline));
}

inline xolap::CubeView eval(const nlohmann::json& pipeline) { return eval(*sample(), pipeline); }

inline nlohmann::json base(std::initializer_list<std::pair<const char*, const char*>> axes) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [d, l] : axes) a.push_back({{"dimension", d}, {"level", l}});
  return {{"op", "base"}, {"fact", "sales"}, {"axes", a}};
}

inline std::string amount(const xolap::CubeView& v, const xolap::Coordinate& c, const char* measure = "amount") {
  auto value = v.value(c, measure);
  return value ? value->str() : "<none>";
}

}  // namespace fixtures

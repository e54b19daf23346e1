#pragma once

#include <memory>
#include <string>

#include "xolap/store.hpp"

namespace httplib {
class Server;
}

namespace xolap {

// Read-only HTTP facade over one immutable instance:
//   GET  /healthz
//   GET  /api/schema
//   GET  /api/dimensions/{id}/members?level=L
//   POST /api/query[?format=xml|csv|json]
//   POST /api/compile
void install_routes(httplib::Server& server, std::shared_ptr<const WarehouseInstance> instance);

std::string schema_json(const WarehouseSchema& schema);

}  // namespace xolap

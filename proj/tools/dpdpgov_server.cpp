// Optional JSON endpoint. Kept in its own translation unit so the heavy
// httplib header stays out of the main CLI file.

#include <iostream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "dpdpgov/engine.hpp"

namespace dpdpgov::engine {
class Engine;
}

int run_server(dpdpgov::engine::Engine& eng, int port) {
  using namespace dpdpgov;
  httplib::Server server;

  server.Post("/evaluate", [&eng](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json out;
    try {
      AccessRequest request = engine::parse_request(req.body);
      auto outcome = eng.evaluate(request);
      out["trust"] = to_string(outcome.data_profile.trust);
      out["sensitivity"] = to_string(outcome.finding.level);
      out["defaulted"] = outcome.finding.defaulted;
      out["strategy"] = outcome.strategy.name;
      out["score"] = outcome.result.score;
      out["report"] = outcome.report;
      res.status = 200;
    } catch (const engine::StageError& e) {
      out["stage"] = e.stage();
      out["error"] = e.what();
      res.status = 422;
    } catch (const std::exception& e) {
      out["error"] = e.what();
      res.status = 400;
    }
    res.set_content(out.dump(2), "application/json");
  });

  std::cout << "listening on 127.0.0.1:" << port << " (POST /evaluate)\n";
  if (!server.listen("127.0.0.1", port)) {
    std::cerr << "failed to bind port " << port << "\n";
    return 1;
  }
  return 0;
}

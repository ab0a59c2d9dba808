#pragma once

#include <cstdint>
#include <memory>
#include <string>

namespace blockea {

/// HTTP companion service for the browser editor. Runs live in memory only;
/// a restart forgets them.
///
///   POST /programs/validate          XML body -> {"ok", "diagnostics"}
///   POST /programs/export-code       XML body, ?seed= -> {"program.js", "blockea_runtime.js"}
///   POST /runs                       XML body, ?seed=&mode= -> {"id", "state"}
///   GET  /runs/{id}                  -> {"id", "state", "events", ...}
///   GET  /runs/{id}/events           one JSON event per line, then an end marker line
///   POST /runs/{id}/cancel
///   GET  /runs/{id}/export?format=csv|ioh
///   GET  /examples, GET /examples/{name}, GET /registry
class Service {
 public:
  Service();
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds; returns the bound port (an ephemeral one when `port` is 0).
  /// Throws BindFailure (std::runtime_error) if the port is taken.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call after bind().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace blockea

#pragma once

#include "modelforge/api/workbench.hpp"

#include <memory>

namespace modelforge::api {

/// HTTP front end over a workbench. Bodies are JSON objects; the routes and
/// field names are listed in docs/api.md.
class Server {
public:
  explicit Server(Workbench& wb);
  ~Server();

  /// Binds the listening socket; port 0 picks a free port. Throws
  /// ApiError(BindFailure).
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call bind first.
  void run();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace modelforge::api

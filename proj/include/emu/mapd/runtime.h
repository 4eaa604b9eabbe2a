#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "emu/mapd/topology.h"

namespace emu::mapd {

/// A process running inside a container with its terminal bridged to us.
class ExecSession {
 public:
  virtual ~ExecSession() = default;

  /// Blocks until output is available. Returns an empty string at end of
  /// stream.
  virtual std::string read() = 0;
  virtual void write(const std::string& bytes) = 0;
  /// Terminates the session; a blocked read() returns.
  virtual void close() = 0;
};

class ContainerRuntime {
 public:
  virtual ~ContainerRuntime() = default;

  /// Throws SourceUnavailable when the runtime cannot be reached.
  virtual std::vector<LabeledContainer> containers() = 0;
  virtual std::vector<LabeledNetwork> networks() = 0;
  virtual std::unique_ptr<ExecSession> exec(const std::string& containerId, const std::vector<std::string>& command) = 0;
};

/// Docker Engine API client over its unix socket.
class DockerRuntime : public ContainerRuntime {
 public:
  explicit DockerRuntime(std::string socketPath, std::string apiVersion = "v1.41");

  std::vector<LabeledContainer> containers() override;
  std::vector<LabeledNetwork> networks() override;
  std::unique_ptr<ExecSession> exec(const std::string& containerId, const std::vector<std::string>& command) override;

  const std::string& socketPath() const { return socketPath_; }

 private:
  std::string socketPath_;
  std::string apiVersion_;
};

}  // namespace emu::mapd

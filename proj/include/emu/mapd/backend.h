#pragma once

#include <atomic>
#include <filesystem>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "emu/mapd/events.h"
#include "emu/mapd/runtime.h"
#include "emu/mapd/sources.h"
#include "emu/mapd/topology.h"

namespace emu::mapd {

enum class Mode { kLive, kOffline };

Mode parseMode(const std::string& text);
std::string_view modeName(Mode mode);

struct BackendOptions {
  Mode mode = Mode::kOffline;
  /// Offline: compiled output directory or manifest file.
  std::filesystem::path manifest;
  /// Live: Docker Engine socket.
  std::string runtimeSocket = "/var/run/docker.sock";
  /// Empty picks "scripted" offline and "capture" live.
  std::string source;
  int tickMs = 0;
  uint64_t seed = 1;
};

/// Everything the HTTP/WS layer talks to.
class Backend {
 public:
  /// Offline: reads the manifest. Live: connects a DockerRuntime.
  explicit Backend(const BackendOptions& options);
  /// Live mode over an arbitrary runtime.
  Backend(std::unique_ptr<ContainerRuntime> runtime, const BackendOptions& options);
  ~Backend();

  Mode mode() const { return options_.mode; }

  /// Offline: the loaded snapshot. Live: re-reads the runtime.
  std::shared_ptr<const TopologyDocument> topology();
  std::optional<TopologyNode> node(const std::string& id);

  void setFilter(const std::string& expr);
  std::string filter() const;

  std::string startRecording();
  Recording stopRecording();
  Recorder& recorder() { return recorder_; }

  /// Validates synchronously, then re-emits the recording on a background
  /// thread.
  void replay(const std::string& id, int intervalMs);

  /// Throws OfflineMode / NodeNotRunning.
  std::unique_ptr<ExecSession> attachConsole(const std::string& id);

  EventHub& hub() { return hub_; }
  EventSource& source() { return *source_; }

  /// Stops the source and cancels running replays.
  void shutdown();

 private:
  void init();

  BackendOptions options_;
  std::unique_ptr<ContainerRuntime> runtime_;
  std::shared_ptr<const TopologyDocument> snapshot_;
  mutable std::mutex mutex_;
  std::string filter_;

  EventHub hub_;
  Recorder recorder_;
  std::unique_ptr<EventSource> source_;

  std::atomic<bool> stopping_{false};
  std::mutex replayMutex_;
  struct ReplayThread {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };
  std::list<ReplayThread> replays_;
};

}  // namespace emu::mapd

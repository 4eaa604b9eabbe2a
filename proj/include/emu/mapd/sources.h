#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "emu/mapd/events.h"
#include "emu/mapd/filter.h"
#include "emu/mapd/runtime.h"
#include "emu/mapd/topology.h"

namespace emu::mapd {

struct SourceContext {
  /// Offline topology snapshot.
  std::shared_ptr<const TopologyDocument> topology;
  EventHub* hub = nullptr;
  /// Null in offline mode.
  ContainerRuntime* runtime = nullptr;
  uint64_t seed = 1;
  /// Scripted generator period; 0 disables the background generator.
  int tickMs = 0;
};

/// Produces sniff events for the nodes of one topology. Sources stay silent
/// until a filter is set.
class EventSource {
 public:
  virtual ~EventSource() = default;

  virtual std::string name() const = 0;
  /// Throws FilterRejected; the previous filter stays in force.
  virtual void setFilter(const std::string& expr) = 0;
  virtual void start() {}
  virtual void stop() {}
};

using EventSourceFactory = std::function<std::unique_ptr<EventSource>(const SourceContext&)>;

void registerEventSource(const std::string& name, EventSourceFactory factory);
/// Throws InvalidArgument for unknown names.
std::unique_ptr<EventSource> createEventSource(const std::string& name, const SourceContext& context);
std::vector<std::string> eventSourceNames();

/// Offline packet generator. Every generated packet is shown to the filter;
/// the sending node and, when it is part of the emulation, the receiving
/// node each emit one event per match.
class ScriptedSource : public EventSource {
 public:
  explicit ScriptedSource(const SourceContext& context);
  ~ScriptedSource() override;

  std::string name() const override { return "scripted"; }
  void setFilter(const std::string& expr) override;
  void start() override;
  void stop() override;

  /// Generates one packet; returns the number of events it produced.
  int step();
  /// Generates packets until `events` events have been produced or
  /// `maxPackets` packets were tried. Returns the events produced.
  int produce(int events, int maxPackets = 100000);
  int inject(const Packet& packet);

  Packet nextPacket();

 private:
  struct Endpoint {
    std::string nodeId;
    Ipv4Address address;
  };

  SourceContext context_;
  std::vector<Endpoint> endpoints_;
  std::mutex mutex_;
  std::optional<CaptureFilter> filter_;
  std::mt19937_64 rng_;
  int64_t lastTimestamp_ = 0;

  std::thread worker_;
  std::mutex stopMutex_;
  std::condition_variable stopSignal_;
  bool stopping_ = false;
};

/// Live capture: one tcpdump per running node, each output line one event.
class CaptureSource : public EventSource {
 public:
  explicit CaptureSource(const SourceContext& context);
  ~CaptureSource() override;

  std::string name() const override { return "capture"; }
  void setFilter(const std::string& expr) override;
  void stop() override;

  static std::vector<std::string> command(const std::string& expr);
  /// True when the first output of a capture process says it refused the
  /// expression.
  static bool isRejection(const std::string& output);

 private:
  struct Capture;

  void closeAll(std::vector<std::shared_ptr<Capture>>& captures);

  SourceContext context_;
  std::mutex mutex_;
  std::vector<std::shared_ptr<Capture>> captures_;
};

}  // namespace emu::mapd

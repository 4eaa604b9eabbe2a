#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace emu::mapd {

struct SniffEvent {
  std::string nodeId;
  int64_t timestampMs = 0;
  std::string summary;
  /// Name of the event source that produced it.
  std::string source;
  /// Set on events re-emitted by a replay.
  std::optional<std::string> replayOf;

  nlohmann::json toJson() const;
  /// Single-line JSON.
  std::string wire() const { return toJson().dump(); }
  friend bool operator==(const SniffEvent&, const SniffEvent&) = default;
};

int64_t nowMs();

/// One client's bounded queue. When full, the oldest event is dropped and
/// counted.
class Subscription {
 public:
  Subscription(size_t capacity, std::function<void()> notify)
      : capacity_(capacity), notify_(std::move(notify)) {}

  std::optional<SniffEvent> tryPop();
  /// Waits up to `timeout` for an event.
  std::optional<SniffEvent> pop(std::chrono::milliseconds timeout);
  uint64_t dropped() const;
  size_t size() const;

 private:
  friend class EventHub;
  void push(const SniffEvent& event);

  const size_t capacity_;
  std::function<void()> notify_;
  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<SniffEvent> queue_;
  uint64_t dropped_ = 0;
};

/// Fans every published event out to all live subscriptions and taps.
class EventHub {
 public:
  std::shared_ptr<Subscription> subscribe(size_t capacity = 1024, std::function<void()> notify = {});
  void unsubscribe(const std::shared_ptr<Subscription>& subscription);
  /// Synchronous observers, called in publish order.
  void addTap(std::function<void(const SniffEvent&)> tap);

  void publish(const SniffEvent& event);
  size_t subscriberCount() const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::weak_ptr<Subscription>> subscribers_;
  std::vector<std::function<void(const SniffEvent&)>> taps_;
};

struct Recording {
  std::string id;
  std::string filterExpr;
  std::vector<SniffEvent> events;
};

/// Captures live events between start() and stop(); ignores replays.
class Recorder {
 public:
  void attach(EventHub& hub);

  /// Starts a new recording; throws InvalidArgument if one is running.
  std::string start(std::string filterExpr);
  /// Throws InvalidArgument if nothing is recording.
  Recording stop();
  bool recording() const;

  std::optional<Recording> find(const std::string& id) const;
  std::vector<std::string> ids() const;

  /// Re-emits a recording in order, `intervalMs` apart, through `emit`.
  /// Returns early (false) when `cancelled` turns true. Throws
  /// UnknownRecording / InvalidArgument.
  bool replay(const std::string& id, int intervalMs, const std::function<void(const SniffEvent&)>& emit,
              const std::function<bool()>& cancelled = {}) const;

  void observe(const SniffEvent& event);

 private:
  mutable std::mutex mutex_;
  std::optional<Recording> active_;
  std::map<std::string, Recording> finished_;
  int counter_ = 0;
};

}  // namespace emu::mapd

#include "emu/mapd/events.h"

#include <algorithm>
#include <thread>

#include "emu/error.h"

namespace emu::mapd {

nlohmann::json SniffEvent::toJson() const {
  nlohmann::ordered_json out;
  out["type"] = "sniff";
  out["nodeId"] = nodeId;
  out["timestampMs"] = timestampMs;
  out["summary"] = summary;
  out["source"] = source;
  if (replayOf) out["replayOf"] = *replayOf;
  return out;
}

int64_t nowMs() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

// ---------------------------------------------------------------------------

void Subscription::push(const SniffEvent& event) {
  {
    std::lock_guard lock(mutex_);
    if (queue_.size() >= capacity_) {
      queue_.pop_front();
      ++dropped_;
    }
    queue_.push_back(event);
  }
  ready_.notify_one();
  if (notify_) notify_();
}

std::optional<SniffEvent> Subscription::tryPop() {
  std::lock_guard lock(mutex_);
  if (queue_.empty()) return std::nullopt;
  SniffEvent event = std::move(queue_.front());
  queue_.pop_front();
  return event;
}

std::optional<SniffEvent> Subscription::pop(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  if (!ready_.wait_for(lock, timeout, [&] { return !queue_.empty(); })) return std::nullopt;
  SniffEvent event = std::move(queue_.front());
  queue_.pop_front();
  return event;
}

uint64_t Subscription::dropped() const {
  std::lock_guard lock(mutex_);
  return dropped_;
}

size_t Subscription::size() const {
  std::lock_guard lock(mutex_);
  return queue_.size();
}

std::shared_ptr<Subscription> EventHub::subscribe(size_t capacity, std::function<void()> notify) {
  auto subscription = std::make_shared<Subscription>(std::max<size_t>(capacity, 1), std::move(notify));
  std::lock_guard lock(mutex_);
  subscribers_.push_back(subscription);
  return subscription;
}

void EventHub::unsubscribe(const std::shared_ptr<Subscription>& subscription) {
  std::lock_guard lock(mutex_);
  std::erase_if(subscribers_, [&](const auto& weak) {
    auto live = weak.lock();
    return !live || live == subscription;
  });
}

void EventHub::addTap(std::function<void(const SniffEvent&)> tap) {
  std::lock_guard lock(mutex_);
  taps_.push_back(std::move(tap));
}

void EventHub::publish(const SniffEvent& event) {
  std::vector<std::shared_ptr<Subscription>> live;
  {
    // Taps run under the lock so they observe events in publish order.
    std::lock_guard lock(mutex_);
    for (const auto& tap : taps_) tap(event);
    std::erase_if(subscribers_, [](const auto& weak) { return weak.expired(); });
    for (const auto& weak : subscribers_) {
      if (auto subscription = weak.lock()) live.push_back(std::move(subscription));
    }
  }
  for (const auto& subscription : live) subscription->push(event);
}

size_t EventHub::subscriberCount() const {
  std::lock_guard lock(mutex_);
  size_t count = 0;
  for (const auto& weak : subscribers_) count += weak.expired() ? 0 : 1;
  return count;
}

// ---------------------------------------------------------------------------

void Recorder::attach(EventHub& hub) {
  hub.addTap([this](const SniffEvent& event) { observe(event); });
}

std::string Recorder::start(std::string filterExpr) {
  std::lock_guard lock(mutex_);
  if (active_) throw Error(ErrorCode::kInvalidArgument, "recording " + active_->id + " is already running");
  active_ = Recording{"rec-" + std::to_string(++counter_), std::move(filterExpr), {}};
  return active_->id;
}

Recording Recorder::stop() {
  std::lock_guard lock(mutex_);
  if (!active_) throw Error(ErrorCode::kInvalidArgument, "no recording is running");
  Recording done = std::move(*active_);
  active_.reset();
  finished_[done.id] = done;
  return done;
}

bool Recorder::recording() const {
  std::lock_guard lock(mutex_);
  return active_.has_value();
}

std::optional<Recording> Recorder::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = finished_.find(id);
  if (it != finished_.end()) return it->second;
  return std::nullopt;
}

std::vector<std::string> Recorder::ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, recording] : finished_) out.push_back(id);
  return out;
}

void Recorder::observe(const SniffEvent& event) {
  if (event.replayOf) return;
  std::lock_guard lock(mutex_);
  if (!active_) return;
  SniffEvent copy = event;
  if (!active_->events.empty()) copy.timestampMs = std::max(copy.timestampMs, active_->events.back().timestampMs);
  active_->events.push_back(std::move(copy));
}

bool Recorder::replay(const std::string& id, int intervalMs, const std::function<void(const SniffEvent&)>& emit,
                      const std::function<bool()>& cancelled) const {
  if (intervalMs < 1) throw Error(ErrorCode::kInvalidArgument, "intervalMs must be at least 1");
  auto recording = find(id);
  if (!recording) throw Error(ErrorCode::kUnknownRecording, id);
  auto due = std::chrono::steady_clock::now();
  for (size_t i = 0; i < recording->events.size(); ++i) {
    if (i > 0) {
      due += std::chrono::milliseconds(intervalMs);
      while (std::chrono::steady_clock::now() < due) {
        if (cancelled && cancelled()) return false;
        std::this_thread::sleep_until(std::min(due, std::chrono::steady_clock::now() + std::chrono::milliseconds(50)));
      }
    }
    if (cancelled && cancelled()) return false;
    SniffEvent event = recording->events[i];
    event.replayOf = id;
    emit(event);
  }
  return true;
}

}  // namespace emu::mapd

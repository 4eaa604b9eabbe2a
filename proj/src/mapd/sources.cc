#include "emu/mapd/sources.h"

#include <algorithm>
#include <chrono>
#include <future>
#include <map>

#include "emu/error.h"

namespace emu::mapd {

namespace {

std::mutex& registryMutex() {
  static std::mutex mutex;
  return mutex;
}

std::map<std::string, EventSourceFactory>& registry() {
  static std::map<std::string, EventSourceFactory> factories{
      {"scripted", [](const SourceContext& c) { return std::make_unique<ScriptedSource>(c); }},
      {"capture", [](const SourceContext& c) { return std::make_unique<CaptureSource>(c); }},
  };
  return factories;
}

}  // namespace

void registerEventSource(const std::string& name, EventSourceFactory factory) {
  std::lock_guard lock(registryMutex());
  registry()[name] = std::move(factory);
}

std::unique_ptr<EventSource> createEventSource(const std::string& name, const SourceContext& context) {
  EventSourceFactory factory;
  {
    std::lock_guard lock(registryMutex());
    auto it = registry().find(name);
    if (it == registry().end()) throw Error(ErrorCode::kInvalidArgument, "unknown event source " + name);
    factory = it->second;
  }
  return factory(context);
}

std::vector<std::string> eventSourceNames() {
  std::lock_guard lock(registryMutex());
  std::vector<std::string> out;
  for (const auto& [name, factory] : registry()) out.push_back(name);
  return out;
}

// ---------------------------------------------------------------------------

ScriptedSource::ScriptedSource(const SourceContext& context) : context_(context), rng_(context.seed) {
  if (!context_.topology) return;
  for (const auto& node : context_.topology->nodes) {
    for (const auto& attachment : node.attachments) {
      if (auto address = Ipv4Address::parse(attachment.address)) endpoints_.push_back({node.id, *address});
    }
  }
}

ScriptedSource::~ScriptedSource() { stop(); }

void ScriptedSource::setFilter(const std::string& expr) {
  CaptureFilter filter = CaptureFilter::parse(expr);
  std::lock_guard lock(mutex_);
  filter_ = std::move(filter);
}

Packet ScriptedSource::nextPacket() {
  static constexpr Ipv4Address kOutside(0x01020304);  // 1.2.3.4
  Packet packet;
  if (endpoints_.empty()) {
    packet.protocol = "icmp";
    packet.dst = kOutside;
    return packet;
  }
  std::uniform_int_distribution<size_t> pick(0, endpoints_.size() - 1);
  const Endpoint& from = endpoints_[pick(rng_)];
  packet.src = from.address;
  const int kind = std::uniform_int_distribution<int>(0, 7)(rng_);
  if (kind == 0) {
    packet.protocol = "icmp";
    packet.dst = kOutside;
  } else {
    packet.dst = endpoints_[pick(rng_)].address;
    packet.protocol = kind <= 2 ? "icmp" : kind <= 5 ? "tcp" : "udp";
  }
  if (packet.protocol != "icmp") {
    static constexpr int kPorts[] = {22, 53, 80, 443, 8080};
    packet.srcPort = std::uniform_int_distribution<int>(32768, 60999)(rng_);
    packet.dstPort = kPorts[std::uniform_int_distribution<size_t>(0, std::size(kPorts) - 1)(rng_)];
  }
  packet.length = std::uniform_int_distribution<int>(40, 1500)(rng_);
  return packet;
}

int ScriptedSource::inject(const Packet& packet) {
  std::vector<SniffEvent> events;
  {
    std::lock_guard lock(mutex_);
    if (!filter_ || !filter_->matches(packet)) return 0;
    const std::string summary = packet.summary();
    std::vector<std::string> seenBy;
    for (const auto& endpoint : endpoints_) {
      if (endpoint.address == packet.src || endpoint.address == packet.dst) {
        if (std::find(seenBy.begin(), seenBy.end(), endpoint.nodeId) == seenBy.end()) seenBy.push_back(endpoint.nodeId);
      }
    }
    for (const auto& nodeId : seenBy) {
      lastTimestamp_ = std::max(lastTimestamp_, nowMs());
      events.push_back({nodeId, lastTimestamp_, summary, "scripted", std::nullopt});
    }
    // Publish while holding the lock so concurrent steps keep timestamps ordered.
    for (const auto& event : events) context_.hub->publish(event);
  }
  return static_cast<int>(events.size());
}

int ScriptedSource::step() {
  Packet packet;
  {
    std::lock_guard lock(mutex_);
    packet = nextPacket();
  }
  return inject(packet);
}

int ScriptedSource::produce(int events, int maxPackets) {
  int produced = 0;
  for (int i = 0; i < maxPackets && produced < events; ++i) {
    Packet packet;
    {
      std::lock_guard lock(mutex_);
      packet = nextPacket();
    }
    // Stop exactly at the requested count.
    std::lock_guard lock(mutex_);
    if (!filter_ || !filter_->matches(packet)) continue;
    for (const auto& endpoint : endpoints_) {
      if (produced >= events) break;
      if (endpoint.address != packet.src && endpoint.address != packet.dst) continue;
      lastTimestamp_ = std::max(lastTimestamp_, nowMs());
      context_.hub->publish({endpoint.nodeId, lastTimestamp_, packet.summary(), "scripted", std::nullopt});
      ++produced;
    }
  }
  return produced;
}

void ScriptedSource::start() {
  if (context_.tickMs <= 0 || worker_.joinable()) return;
  {
    std::lock_guard lock(stopMutex_);
    stopping_ = false;
  }
  worker_ = std::thread([this] {
    std::unique_lock lock(stopMutex_);
    while (!stopSignal_.wait_for(lock, std::chrono::milliseconds(context_.tickMs), [this] { return stopping_; })) {
      lock.unlock();
      step();
      lock.lock();
    }
  });
}

void ScriptedSource::stop() {
  {
    std::lock_guard lock(stopMutex_);
    stopping_ = true;
  }
  stopSignal_.notify_all();
  if (worker_.joinable()) worker_.join();
}

// ---------------------------------------------------------------------------

struct CaptureSource::Capture {
  std::string nodeId;
  std::unique_ptr<ExecSession> session;
  std::thread reader;
  std::promise<std::string> firstOutput;
};

CaptureSource::CaptureSource(const SourceContext& context) : context_(context) {}

CaptureSource::~CaptureSource() { stop(); }

std::vector<std::string> CaptureSource::command(const std::string& expr) {
  return {"tcpdump", "-l", "-n", "-i", "any", expr};
}

bool CaptureSource::isRejection(const std::string& output) {
  return output.find("can't parse filter expression") != std::string::npos ||
         output.find("syntax error") != std::string::npos;
}

void CaptureSource::closeAll(std::vector<std::shared_ptr<Capture>>& captures) {
  for (auto& capture : captures) capture->session->close();
  for (auto& capture : captures) {
    if (capture->reader.joinable()) capture->reader.join();
  }
  captures.clear();
}

void CaptureSource::setFilter(const std::string& expr) {
  if (expr.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::kFilterRejected, "empty expression");
  }
  if (!context_.runtime) throw Error(ErrorCode::kOfflineMode, "capture needs a container runtime");

  std::vector<std::shared_ptr<Capture>> fresh;
  std::vector<std::future<std::string>> verdicts;
  for (const auto& container : context_.runtime->containers()) {
    if (container.running && !*container.running) continue;
    auto capture = std::make_shared<Capture>();
    capture->nodeId = container.id;
    try {
      capture->session = context_.runtime->exec(container.id, command(expr));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kNodeNotRunning) continue;
      closeAll(fresh);
      throw;
    }
    verdicts.push_back(capture->firstOutput.get_future());
    EventHub* hub = context_.hub;
    capture->reader = std::thread([capture, hub] {
      std::string pending;
      bool first = true;
      for (;;) {
        std::string chunk = capture->session->read();
        if (first) {
          capture->firstOutput.set_value(chunk);
          first = false;
        }
        if (chunk.empty()) return;
        pending += chunk;
        size_t eol;
        while ((eol = pending.find('\n')) != std::string::npos) {
          std::string line = pending.substr(0, eol);
          pending.erase(0, eol + 1);
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (line.empty() || line.rfind("tcpdump:", 0) == 0 || line.rfind("listening on", 0) == 0) continue;
          hub->publish({capture->nodeId, nowMs(), line, "capture", std::nullopt});
        }
      }
    });
    fresh.push_back(std::move(capture));
  }

  // Every node runs the same tcpdump, so the first answer decides.
  if (!verdicts.empty() && verdicts.front().wait_for(std::chrono::seconds(3)) == std::future_status::ready) {
    const std::string output = verdicts.front().get();
    if (isRejection(output)) {
      closeAll(fresh);
      throw Error(ErrorCode::kFilterRejected, output.substr(0, output.find('\n')));
    }
  }

  std::vector<std::shared_ptr<Capture>> old;
  {
    std::lock_guard lock(mutex_);
    old.swap(captures_);
    captures_ = std::move(fresh);
  }
  closeAll(old);
}

void CaptureSource::stop() {
  std::vector<std::shared_ptr<Capture>> old;
  {
    std::lock_guard lock(mutex_);
    old.swap(captures_);
  }
  closeAll(old);
}

}  // namespace emu::mapd

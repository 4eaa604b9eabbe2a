#include "emu/mapd/backend.h"

#include "emu/error.h"

namespace emu::mapd {

Mode parseMode(const std::string& text) {
  if (text == "live") return Mode::kLive;
  if (text == "offline") return Mode::kOffline;
  throw Error(ErrorCode::kInvalidArgument, "mode must be live or offline, not '" + text + "'");
}

std::string_view modeName(Mode mode) { return mode == Mode::kLive ? "live" : "offline"; }

Backend::Backend(const BackendOptions& options) : options_(options) {
  if (options_.mode == Mode::kLive) {
    runtime_ = std::make_unique<DockerRuntime>(options_.runtimeSocket);
  } else {
    snapshot_ = std::make_shared<const TopologyDocument>(loadTopologyFromManifest(options_.manifest));
  }
  init();
}

Backend::Backend(std::unique_ptr<ContainerRuntime> runtime, const BackendOptions& options)
    : options_(options), runtime_(std::move(runtime)) {
  options_.mode = Mode::kLive;
  init();
}

Backend::~Backend() { shutdown(); }

void Backend::init() {
  recorder_.attach(hub_);
  if (options_.mode == Mode::kLive) snapshot_ = topology();
  SourceContext context{snapshot_, &hub_, runtime_.get(), options_.seed, options_.tickMs};
  const std::string name =
      !options_.source.empty() ? options_.source : options_.mode == Mode::kLive ? "capture" : "scripted";
  source_ = createEventSource(name, context);
  source_->start();
}

std::shared_ptr<const TopologyDocument> Backend::topology() {
  if (options_.mode == Mode::kOffline) return snapshot_;
  auto fresh = std::make_shared<const TopologyDocument>(buildTopology(runtime_->containers(), runtime_->networks()));
  std::lock_guard lock(mutex_);
  snapshot_ = fresh;
  return fresh;
}

std::optional<TopologyNode> Backend::node(const std::string& id) {
  auto doc = topology();
  if (const TopologyNode* found = doc->find(id)) return *found;
  return std::nullopt;
}

void Backend::setFilter(const std::string& expr) {
  if (expr.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::kFilterRejected, "empty expression");
  }
  source_->setFilter(expr);
  std::lock_guard lock(mutex_);
  filter_ = expr;
}

std::string Backend::filter() const {
  std::lock_guard lock(mutex_);
  return filter_;
}

std::string Backend::startRecording() { return recorder_.start(filter()); }

Recording Backend::stopRecording() { return recorder_.stop(); }

void Backend::replay(const std::string& id, int intervalMs) {
  if (intervalMs < 1) throw Error(ErrorCode::kInvalidArgument, "intervalMs must be at least 1");
  if (!recorder_.find(id)) throw Error(ErrorCode::kUnknownRecording, id);
  if (stopping_) return;
  std::lock_guard lock(replayMutex_);
  for (auto it = replays_.begin(); it != replays_.end();) {
    if (*it->done) {
      it->thread.join();
      it = replays_.erase(it);
    } else {
      ++it;
    }
  }
  auto done = std::make_shared<std::atomic<bool>>(false);
  std::thread thread([this, id, intervalMs, done] {
    try {
      recorder_.replay(
          id, intervalMs, [this](const SniffEvent& event) { hub_.publish(event); },
          [this] { return stopping_.load(); });
    } catch (const Error&) {
    }
    *done = true;
  });
  replays_.push_back({std::move(thread), done});
}

std::unique_ptr<ExecSession> Backend::attachConsole(const std::string& id) {
  if (options_.mode == Mode::kOffline) throw Error(ErrorCode::kOfflineMode, "consoles need a live emulation");
  bool running = false;
  for (const auto& container : runtime_->containers()) {
    if (container.id == id) running = container.running.value_or(false);
  }
  if (!running) throw Error(ErrorCode::kNodeNotRunning, id);
  return runtime_->exec(id, {"/bin/bash"});
}

void Backend::shutdown() {
  if (stopping_.exchange(true)) return;
  if (source_) source_->stop();
  std::list<ReplayThread> replays;
  {
    std::lock_guard lock(replayMutex_);
    replays.swap(replays_);
  }
  for (auto& replay : replays) replay.thread.join();
}

}  // namespace emu::mapd

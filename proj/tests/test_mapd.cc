#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "emu/compile.h"
#include "emu/mapd/backend.h"
#include "emu/mapd/runtime.h"
#include "emu/mapd/filter.h"
#include "emu/mapd/sources.h"
#include "emu/mapd/topology.h"
#include "expect_error.h"
#include "fake_docker.h"
#include "fixtures.h"

namespace fs = std::filesystem;
using namespace std::chrono_literals;

namespace {

using emu::ErrorCode;
using emu::Ipv4Address;
using emu::mapd::CaptureFilter;
using emu::mapd::Packet;
using emu::mapd::SniffEvent;

fs::path tempPath(const std::string& name) {
  return fs::temp_directory_path() / ("emu-mapd-" + name + "-" + std::to_string(::getpid()));
}

// Compiles the Morris fixture once per test binary.
const fs::path& morrisDir() {
  static const fs::path dir = [] {
    const auto out = tempPath("morris");
    fs::remove_all(out);
    emu::compileContainers(fixture::morris(1).render(), out);
    return out;
  }();
  return dir;
}

Packet packet(const char* src, const char* dst, const char* proto, int sport = 0, int dport = 0, int length = 64) {
  Packet p;
  p.src = Ipv4Address::fromString(src);
  p.dst = Ipv4Address::fromString(dst);
  p.protocol = proto;
  p.srcPort = sport;
  p.dstPort = dport;
  p.length = length;
  return p;
}

SniffEvent event(const std::string& node, int64_t ts, const std::string& summary = "x") {
  SniffEvent e;
  e.nodeId = node;
  e.timestampMs = ts;
  e.summary = summary;
  e.source = "test";
  return e;
}

// ---------------------------------------------------------------------------
// Topology

TEST(Topology, MorrisManifest) {
  auto doc = emu::mapd::loadTopologyFromManifest(morrisDir());
  EXPECT_EQ(doc.nodes.size(), 275u);
  EXPECT_GE(doc.networks.size(), 12u);
  std::set<std::string> ids;
  for (const auto& node : doc.nodes) EXPECT_TRUE(ids.insert(node.id).second) << node.id;
  const auto* host = doc.find("as150h-host0");
  ASSERT_NE(host, nullptr);
  EXPECT_EQ(host->asn, 150);
  EXPECT_EQ(host->role, "host");
  EXPECT_FALSE(host->running);
  // The manifest file itself is accepted too.
  EXPECT_EQ(emu::mapd::loadTopologyFromManifest(morrisDir() / emu::kManifestFile).nodes.size(), 275u);
}

TEST(Topology, TriplesMatchRenderedModel) {
  auto rendered = fixture::morris(1).render();
  std::set<std::tuple<std::string, std::string, std::string>> model, doc;
  for (const emu::Node* node : rendered.nodes()) {
    for (const auto& iface : node->interfaces()) {
      model.emplace(node->containerName(), iface.network->qualifiedName(), iface.address.toString());
    }
  }
  auto topology = emu::mapd::loadTopologyFromManifest(morrisDir());
  for (const auto& node : topology.nodes) {
    for (const auto& a : node.attachments) doc.emplace(node.id, a.network, a.address);
  }
  EXPECT_EQ(doc, model);
  size_t interfaces = 0;
  for (const emu::Node* node : rendered.nodes()) interfaces += node->interfaces().size();
  EXPECT_EQ(topology.edges.size(), interfaces);
}

TEST(Topology, EmptyManifest) {
  const auto dir = tempPath("empty");
  fs::remove_all(dir);
  emu::Emulator emulator;
  emu::compileContainers(emulator.render(), dir);
  auto doc = emu::mapd::loadTopologyFromManifest(dir);
  EXPECT_TRUE(doc.nodes.empty());
  EXPECT_TRUE(doc.networks.empty());
  EXPECT_TRUE(doc.edges.empty());
  fs::remove_all(dir);
}

TEST(Topology, MissingNameLabel) {
  const auto file = tempPath("missing.yml");
  std::ofstream(file) << "services:\n  a:\n    labels:\n      emu.node.asn: \"150\"\n      emu.node.role: host\n";
  EXPECT_EQ(codeOf([&] { emu::mapd::loadTopologyFromManifest(file); }), ErrorCode::kMissingLabels);
  fs::remove(file);
}

TEST(Topology, UnreadableSource) {
  EXPECT_EQ(codeOf([] { emu::mapd::loadTopologyFromManifest("/nonexistent/emu/dir"); }),
            ErrorCode::kSourceUnavailable);
  const auto file = tempPath("broken.yml");
  std::ofstream(file) << "services: [unterminated\n";
  EXPECT_EQ(codeOf([&] { emu::mapd::loadTopologyFromManifest(file); }), ErrorCode::kSourceUnavailable);
  fs::remove(file);
}

TEST(Topology, JsonShape) {
  auto doc = emu::mapd::loadTopologyFromManifest(morrisDir());
  const auto json = doc.toJson();
  EXPECT_EQ(json.at("nodes").size(), 275u);
  const auto& first = json.at("nodes").at(0);
  for (const char* key : {"id", "name", "asn", "role", "displayName", "description", "attachments"}) {
    EXPECT_TRUE(first.contains(key)) << key;
  }
  EXPECT_TRUE(json.at("edges").at(0).contains("nodeId"));
  EXPECT_TRUE(json.at("networks").at(0).contains("prefix"));
}

// ---------------------------------------------------------------------------
// Filters

TEST(Filter, Primitives) {
  const auto ping = packet("10.150.0.71", "1.2.3.4", "icmp");
  const auto web = packet("10.150.0.71", "10.151.0.72", "tcp", 40000, 80, 600);
  EXPECT_TRUE(CaptureFilter::parse("icmp").matches(ping));
  EXPECT_FALSE(CaptureFilter::parse("icmp").matches(web));
  EXPECT_TRUE(CaptureFilter::parse("icmp and dst host 1.2.3.4").matches(ping));
  EXPECT_FALSE(CaptureFilter::parse("icmp and dst host 1.2.3.5").matches(ping));
  EXPECT_TRUE(CaptureFilter::parse("host 10.151.0.72").matches(web));
  EXPECT_TRUE(CaptureFilter::parse("src net 10.150.0.0/24").matches(web));
  EXPECT_FALSE(CaptureFilter::parse("dst net 10.150.0.0/24").matches(web));
  EXPECT_TRUE(CaptureFilter::parse("tcp port 80").matches(web));
  EXPECT_TRUE(CaptureFilter::parse("dst port 80").matches(web));
  EXPECT_FALSE(CaptureFilter::parse("src port 80").matches(web));
  EXPECT_TRUE(CaptureFilter::parse("greater 500").matches(web));
  EXPECT_TRUE(CaptureFilter::parse("less 100").matches(ping));
  EXPECT_TRUE(CaptureFilter::parse("ip").matches(ping));
}

TEST(Filter, Combinators) {
  const auto ping = packet("10.150.0.71", "1.2.3.4", "icmp");
  EXPECT_TRUE(CaptureFilter::parse("not tcp").matches(ping));
  EXPECT_TRUE(CaptureFilter::parse("! udp && icmp").matches(ping));
  EXPECT_TRUE(CaptureFilter::parse("tcp or icmp").matches(ping));
  EXPECT_TRUE(CaptureFilter::parse("(tcp || udp) or (icmp and host 1.2.3.4)").matches(ping));
  EXPECT_FALSE(CaptureFilter::parse("icmp and not dst host 1.2.3.4").matches(ping));
  EXPECT_EQ(CaptureFilter::parse("icmp").text(), "icmp");
}

TEST(Filter, Rejections) {
  for (const char* bad : {"", "   ", "icmp and", "host", "host 999.1.1.1", "port x", "(icmp", "bogus", "net 10.0.0.0/40"}) {
    EXPECT_EQ(codeOf([&] { CaptureFilter::parse(bad); }), ErrorCode::kFilterRejected) << bad;
  }
}

// ---------------------------------------------------------------------------
// Events and recordings

TEST(Events, FanOutOncePerSubscriber) {
  emu::mapd::EventHub hub;
  std::vector<std::shared_ptr<emu::mapd::Subscription>> subs;
  for (int i = 0; i < 4; ++i) subs.push_back(hub.subscribe());
  for (int i = 0; i < 50; ++i) hub.publish(event("n" + std::to_string(i), i));
  for (auto& sub : subs) {
    for (int i = 0; i < 50; ++i) {
      auto got = sub->tryPop();
      ASSERT_TRUE(got);
      EXPECT_EQ(got->nodeId, "n" + std::to_string(i));
    }
    EXPECT_FALSE(sub->tryPop());
  }
  hub.unsubscribe(subs[0]);
  EXPECT_EQ(hub.subscriberCount(), 3u);
}

TEST(Events, SlowClientDropsOldest) {
  emu::mapd::EventHub hub;
  auto slow = hub.subscribe(8);
  auto fast = hub.subscribe(1024);
  for (int i = 0; i < 20; ++i) hub.publish(event("n", i));
  EXPECT_EQ(slow->dropped(), 12u);
  EXPECT_EQ(slow->size(), 8u);
  EXPECT_EQ(slow->tryPop()->timestampMs, 12);
  EXPECT_EQ(fast->size(), 20u);
  EXPECT_EQ(fast->dropped(), 0u);
}

TEST(Events, WireIsSingleLineJson) {
  auto e = event("as150h-host0", 1234, "IP 10.150.0.71 > 1.2.3.4: ICMP echo request");
  e.replayOf = "rec-1";
  const std::string line = e.wire();
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const auto json = nlohmann::json::parse(line);
  EXPECT_EQ(json.at("type"), "sniff");
  EXPECT_EQ(json.at("nodeId"), "as150h-host0");
  EXPECT_EQ(json.at("timestampMs"), 1234);
  EXPECT_EQ(json.at("replayOf"), "rec-1");
}

TEST(Recorder, RecordsOnlyWhileActiveAndIgnoresReplays) {
  emu::mapd::EventHub hub;
  emu::mapd::Recorder recorder;
  recorder.attach(hub);
  hub.publish(event("before", 1));
  const auto id = recorder.start("icmp");
  EXPECT_EQ(codeOf([&] { recorder.start("icmp"); }), ErrorCode::kInvalidArgument);
  hub.publish(event("a", 10));
  auto replayed = event("r", 11);
  replayed.replayOf = "rec-0";
  hub.publish(replayed);
  hub.publish(event("b", 5));
  const auto recording = recorder.stop();
  hub.publish(event("after", 20));
  EXPECT_EQ(recording.id, id);
  EXPECT_EQ(recording.filterExpr, "icmp");
  ASSERT_EQ(recording.events.size(), 2u);
  EXPECT_EQ(recording.events[0].nodeId, "a");
  // Timestamps never go backwards inside a recording.
  EXPECT_GE(recording.events[1].timestampMs, recording.events[0].timestampMs);
  EXPECT_EQ(codeOf([&] { recorder.stop(); }), ErrorCode::kInvalidArgument);
  EXPECT_TRUE(recorder.find(id));
  EXPECT_EQ(recorder.ids(), std::vector<std::string>{id});
}

TEST(Recorder, ReplayPacingAndOrder) {
  emu::mapd::EventHub hub;
  emu::mapd::Recorder recorder;
  recorder.attach(hub);
  const auto id = recorder.start("icmp");
  for (int i = 0; i < 10; ++i) hub.publish(event("n" + std::to_string(i), i));
  recorder.stop();

  auto run = [&](int interval) {
    std::vector<std::pair<std::string, std::chrono::steady_clock::time_point>> seen;
    recorder.replay(id, interval, [&](const SniffEvent& e) {
      EXPECT_EQ(e.replayOf, id);
      seen.emplace_back(e.nodeId, std::chrono::steady_clock::now());
    });
    return seen;
  };
  const auto fast = run(1);
  const auto slow = run(100);
  ASSERT_EQ(fast.size(), 10u);
  ASSERT_EQ(slow.size(), 10u);
  for (size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(fast[i].first, "n" + std::to_string(i));
    EXPECT_EQ(slow[i].first, fast[i].first);
  }
  EXPECT_GE(slow.back().second - slow.front().second, 900ms);
  EXPECT_LT(fast.back().second - fast.front().second, 500ms);
}

TEST(Recorder, ReplayErrorsAndCancel) {
  emu::mapd::EventHub hub;
  emu::mapd::Recorder recorder;
  recorder.attach(hub);
  const auto id = recorder.start("icmp");
  for (int i = 0; i < 5; ++i) hub.publish(event("n", i));
  recorder.stop();
  auto ignore = [](const SniffEvent&) {};
  EXPECT_EQ(codeOf([&] { recorder.replay("rec-99", 10, ignore); }), ErrorCode::kUnknownRecording);
  EXPECT_EQ(codeOf([&] { recorder.replay(id, 0, ignore); }), ErrorCode::kInvalidArgument);
  int emitted = 0;
  const auto begin = std::chrono::steady_clock::now();
  EXPECT_FALSE(recorder.replay(id, 10000, [&](const SniffEvent&) { ++emitted; }, [&] {
    return std::chrono::steady_clock::now() - begin > 200ms;
  }));
  EXPECT_EQ(emitted, 1);
}

// ---------------------------------------------------------------------------
// Scripted source

struct ScriptedRig {
  emu::mapd::EventHub hub;
  std::shared_ptr<const emu::mapd::TopologyDocument> topology =
      std::make_shared<emu::mapd::TopologyDocument>(emu::mapd::loadTopologyFromManifest(morrisDir()));
  emu::mapd::ScriptedSource source{emu::mapd::SourceContext{topology, &hub, nullptr, 7, 0}};
  std::shared_ptr<emu::mapd::Subscription> sub = hub.subscribe(100000);
};

TEST(Scripted, SilentWithoutFilter) {
  ScriptedRig rig;
  for (int i = 0; i < 100; ++i) rig.source.step();
  EXPECT_EQ(rig.sub->size(), 0u);
}

TEST(Scripted, WormFilterLightsSendingNodes) {
  ScriptedRig rig;
  rig.source.setFilter("icmp and dst host 1.2.3.4");
  EXPECT_EQ(rig.source.produce(20), 20);
  std::set<std::string> lit;
  while (auto e = rig.sub->tryPop()) {
    EXPECT_NE(e->summary.find("1.2.3.4"), std::string::npos) << e->summary;
    EXPECT_NE(rig.topology->find(e->nodeId), nullptr);
    lit.insert(e->nodeId);
  }
  EXPECT_GT(lit.size(), 1u);
}

TEST(Scripted, InjectReachesBothEnds) {
  ScriptedRig rig;
  rig.source.setFilter("tcp");
  EXPECT_EQ(rig.source.inject(packet("10.150.0.71", "10.151.0.72", "tcp", 40000, 80)), 2);
  EXPECT_EQ(rig.source.inject(packet("10.150.0.71", "10.151.0.72", "udp", 40000, 53)), 0);
  std::set<std::string> nodes;
  while (auto e = rig.sub->tryPop()) nodes.insert(e->nodeId);
  EXPECT_EQ(nodes, (std::set<std::string>{"as150h-host0", "as151h-host1"}));
}

TEST(Scripted, FilterMatchingNothing) {
  ScriptedRig rig;
  rig.source.setFilter("dst host 203.0.113.9");
  for (int i = 0; i < 2000; ++i) rig.source.step();
  EXPECT_EQ(rig.sub->size(), 0u);
}

TEST(Scripted, RejectedFilterKeepsPrevious) {
  ScriptedRig rig;
  rig.source.setFilter("icmp");
  EXPECT_EQ(codeOf([&] { rig.source.setFilter("nonsense here"); }), ErrorCode::kFilterRejected);
  EXPECT_EQ(rig.source.inject(packet("10.150.0.71", "1.2.3.4", "icmp")), 1);
}

TEST(Scripted, SameSeedSameStream) {
  ScriptedRig a, b;
  for (int i = 0; i < 50; ++i) {
    const auto pa = a.source.nextPacket();
    const auto pb = b.source.nextPacket();
    EXPECT_EQ(pa.summary(), pb.summary());
  }
}

TEST(Sources, Registry) {
  const auto names = emu::mapd::eventSourceNames();
  EXPECT_NE(std::find(names.begin(), names.end(), "scripted"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "capture"), names.end());
  emu::mapd::EventHub hub;
  emu::mapd::SourceContext context{nullptr, &hub, nullptr, 1, 0};
  EXPECT_EQ(codeOf([&] { emu::mapd::createEventSource("carrier-pigeon", context); }), ErrorCode::kInvalidArgument);

  struct AppSource : emu::mapd::EventSource {
    std::string name() const override { return "app"; }
    void setFilter(const std::string&) override {}
  };
  emu::mapd::registerEventSource("app", [](const emu::mapd::SourceContext&) { return std::make_unique<AppSource>(); });
  EXPECT_EQ(emu::mapd::createEventSource("app", context)->name(), "app");
}

// ---------------------------------------------------------------------------
// Backend, offline

emu::mapd::BackendOptions offlineOptions() {
  emu::mapd::BackendOptions options;
  options.mode = emu::mapd::Mode::kOffline;
  options.manifest = morrisDir();
  options.seed = 3;
  return options;
}

TEST(BackendOffline, TopologyAndNodes) {
  emu::mapd::Backend backend(offlineOptions());
  EXPECT_EQ(backend.topology()->nodes.size(), 275u);
  EXPECT_EQ(backend.topology(), backend.topology());
  EXPECT_TRUE(backend.node("as2r-r0"));
  EXPECT_FALSE(backend.node("nope"));
  EXPECT_EQ(backend.source().name(), "scripted");
}

TEST(BackendOffline, FilterRules) {
  emu::mapd::Backend backend(offlineOptions());
  EXPECT_EQ(codeOf([&] { backend.setFilter(""); }), ErrorCode::kFilterRejected);
  backend.setFilter("icmp and dst host 1.2.3.4");
  EXPECT_EQ(backend.filter(), "icmp and dst host 1.2.3.4");
  EXPECT_EQ(codeOf([&] { backend.setFilter("icmp and"); }), ErrorCode::kFilterRejected);
  EXPECT_EQ(backend.filter(), "icmp and dst host 1.2.3.4");
}

TEST(BackendOffline, ConsoleRefused) {
  emu::mapd::Backend backend(offlineOptions());
  EXPECT_EQ(codeOf([&] { backend.attachConsole("as150h-host0"); }), ErrorCode::kOfflineMode);
}

TEST(BackendOffline, RecordAndReplay) {
  emu::mapd::Backend backend(offlineOptions());
  backend.setFilter("icmp");
  auto& source = dynamic_cast<emu::mapd::ScriptedSource&>(backend.source());
  const auto id = backend.startRecording();
  source.produce(10);
  const auto recording = backend.stopRecording();
  ASSERT_EQ(recording.events.size(), 10u);

  auto sub = backend.hub().subscribe();
  const auto begin = std::chrono::steady_clock::now();
  backend.replay(id, 50);
  std::vector<SniffEvent> replayed;
  while (replayed.size() < 10) {
    auto e = sub->pop(2s);
    ASSERT_TRUE(e);
    if (e->replayOf) replayed.push_back(*e);
  }
  EXPECT_GE(std::chrono::steady_clock::now() - begin, 440ms);
  for (size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(replayed[i].nodeId, recording.events[i].nodeId);
    EXPECT_EQ(replayed[i].summary, recording.events[i].summary);
  }
  EXPECT_EQ(codeOf([&] { backend.replay("rec-404", 10); }), ErrorCode::kUnknownRecording);
  EXPECT_EQ(codeOf([&] { backend.replay(id, 0); }), ErrorCode::kInvalidArgument);
  backend.shutdown();
}

TEST(BackendOffline, BackgroundTicker) {
  auto options = offlineOptions();
  options.tickMs = 5;
  emu::mapd::Backend backend(options);
  auto sub = backend.hub().subscribe();
  backend.setFilter("ip");
  EXPECT_TRUE(sub->pop(3s));
  backend.shutdown();
}

// ---------------------------------------------------------------------------
// Live mode against the fake engine

struct LiveRig {
  fs::path socket = tempPath("docker.sock");
  std::unique_ptr<fake::DockerEngine> engine;
  std::unique_ptr<emu::mapd::Backend> backend;

  explicit LiveRig(bool stoppedHost = false) {
    fs::remove(socket);
    engine = std::make_unique<fake::DockerEngine>(socket);
    auto manifest = emu::buildManifest(fixture::hijack().render());
    for (const auto& spec : manifest.services) {
      engine->addContainer({spec.name, spec.labels, !(stoppedHost && spec.name == "as150h-host1")});
    }
    engine->addContainer({"unrelated", {{"com.example", "1"}}, true});
    for (const auto& network : manifest.networks) engine->addNetwork(network.key, network.prefix.toString(), network.labels);
    emu::mapd::BackendOptions options;
    options.mode = emu::mapd::Mode::kLive;
    options.runtimeSocket = socket.string();
    backend = std::make_unique<emu::mapd::Backend>(options);
  }
  ~LiveRig() {
    backend->shutdown();
    backend.reset();
    engine.reset();
    fs::remove(socket);
  }
};

std::string readUntil(emu::mapd::ExecSession& session, const std::string& needle) {
  std::string seen;
  const auto deadline = std::chrono::steady_clock::now() + 5s;
  while (seen.find(needle) == std::string::npos && std::chrono::steady_clock::now() < deadline) {
    const std::string chunk = session.read();
    if (chunk.empty()) break;
    seen += chunk;
  }
  return seen;
}

TEST(Live, TopologyFromRuntime) {
  LiveRig rig(true);
  auto doc = rig.backend->topology();
  EXPECT_EQ(doc->nodes.size(), fixture::hijack().render().nodes().size());
  EXPECT_EQ(doc->find("unrelated"), nullptr);
  ASSERT_NE(doc->find("as150h-host0"), nullptr);
  EXPECT_EQ(doc->find("as150h-host0")->running, true);
  EXPECT_EQ(doc->find("as150h-host1")->running, false);
  EXPECT_FALSE(doc->networks.empty());
}

TEST(Live, ConsoleEcho) {
  LiveRig rig;
  auto session = rig.backend->attachConsole("as150h-host0");
  readUntil(*session, "# ");
  session->write("echo hi\n");
  const std::string out = readUntil(*session, "hi\r\n# ");
  EXPECT_NE(out.find("hi"), std::string::npos) << out;
  session->write("exit\n");
  const auto deadline = std::chrono::steady_clock::now() + 5s;
  while (!session->read().empty() && std::chrono::steady_clock::now() < deadline) {
  }
  session->close();
  const auto commands = rig.engine->execCommands();
  ASSERT_FALSE(commands.empty());
  EXPECT_EQ(commands.back(), std::vector<std::string>{"/bin/bash"});
}

TEST(Live, ConsoleErrors) {
  LiveRig rig(true);
  EXPECT_EQ(codeOf([&] { rig.backend->attachConsole("as150h-host1"); }), ErrorCode::kNodeNotRunning);
  EXPECT_EQ(codeOf([&] { rig.backend->attachConsole("no-such-node"); }), ErrorCode::kNodeNotRunning);
}

TEST(Live, CaptureDistributesFilterVerbatim) {
  LiveRig rig;
  auto sub = rig.backend->hub().subscribe();
  rig.backend->setFilter("icmp and dst host 1.2.3.4");
  auto e = sub->pop(5s);
  ASSERT_TRUE(e);
  EXPECT_EQ(e->source, "capture");
  EXPECT_NE(rig.backend->topology()->find(e->nodeId), nullptr);
  size_t captures = 0;
  for (const auto& command : rig.engine->execCommands()) {
    if (command.empty() || command[0] != "tcpdump") continue;
    ++captures;
    EXPECT_EQ(command.back(), "icmp and dst host 1.2.3.4");
  }
  EXPECT_EQ(captures, rig.backend->topology()->nodes.size());
}

TEST(Live, CaptureRejection) {
  LiveRig rig;
  EXPECT_EQ(codeOf([&] { rig.backend->setFilter("bogus expression"); }), ErrorCode::kFilterRejected);
  EXPECT_TRUE(emu::mapd::CaptureSource::isRejection("tcpdump: can't parse filter expression: syntax error"));
  EXPECT_FALSE(emu::mapd::CaptureSource::isRejection("listening on any, link-type LINUX_SLL2"));
}

TEST(Live, UnreachableRuntime) {
  emu::mapd::BackendOptions options;
  options.mode = emu::mapd::Mode::kLive;
  options.runtimeSocket = tempPath("absent.sock").string();
  EXPECT_EQ(codeOf([&] {
              emu::mapd::Backend backend(options);
              backend.topology();
            }),
            ErrorCode::kSourceUnavailable);
}

}  // namespace

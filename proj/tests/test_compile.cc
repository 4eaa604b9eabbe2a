#include <gtest/gtest.h>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/graphviz.hpp>
#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <random>
#include <set>
#include <tuple>

#include "emu/compile.h"
#include "emu/routing.h"
#include "expect_error.h"
#include "fixtures.h"
#include "oracles.h"

namespace fs = std::filesystem;

namespace {

using Triple = std::tuple<std::string, std::string, std::string>;

fs::path scratchDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("emu-compile-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

// (container, network key, address) from the rendered model itself.
std::set<Triple> modelTriples(const emu::RenderedEmulation& rendered) {
  std::set<Triple> out;
  for (const emu::Node* node : rendered.nodes()) {
    for (const auto& iface : node->interfaces()) {
      out.emplace(node->containerName(), iface.network->qualifiedName(), iface.address.toString());
    }
  }
  return out;
}

// Same triples read back from the compose file, node containers only.
std::set<Triple> manifestTriples(const std::string& yamlText) {
  std::set<Triple> out;
  const YAML::Node root = YAML::Load(yamlText);
  for (const auto& service : root["services"]) {
    if (!service.second["labels"]["emu.node.key"]) continue;
    for (const auto& network : service.second["networks"]) {
      if (!network.second["ipv4_address"]) continue;
      out.emplace(service.first.as<std::string>(), network.first.as<std::string>(),
                  network.second["ipv4_address"].as<std::string>());
    }
  }
  return out;
}

struct DotVertex {
  std::string name;
  std::string kind;
};
using DotGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS, DotVertex>;

DotGraph parseDot(const std::string& text) {
  DotGraph graph;
  boost::dynamic_properties dp(boost::ignore_other_properties);
  dp.property("node_id", boost::get(&DotVertex::name, graph));
  dp.property("kind", boost::get(&DotVertex::kind, graph));
  if (!boost::read_graphviz(text, graph, dp)) throw std::runtime_error("DOT parse failed");
  return graph;
}

size_t countKind(const DotGraph& graph, const std::string& kind) {
  size_t n = 0;
  for (auto v : boost::make_iterator_range(boost::vertices(graph))) n += graph[v].kind == kind;
  return n;
}

// Seeded random base: up to 4 exchanges, up to 8 ASes with 1-3 networks,
// routers chaining them, hosts on random networks.
emu::Emulator randomFixture(uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  emu::Emulator emulator(seed);
  auto base = std::make_shared<emu::Base>();
  const int exchanges = pick(0, 4);
  for (int i = 0; i < exchanges; ++i) base->createInternetExchange(100 + i);
  const int ases = pick(0, 8);
  for (int a = 0; a < ases; ++a) {
    auto& as = base->createAutonomousSystem(150 + a);
    const int nets = pick(1, 3);
    for (int k = 0; k < nets; ++k) as.createNetwork("net" + std::to_string(k));
    const int routers = pick(1, 3);
    for (int r = 0; r < routers; ++r) {
      auto& router = as.createRouter("router" + std::to_string(r)).joinNetwork("net" + std::to_string(r % nets));
      if (r == 0 && exchanges > 0 && pick(0, 1) == 1) router.joinNetwork("ix" + std::to_string(100 + pick(0, exchanges - 1)), "auto");
    }
    const int hosts = pick(0, 6);
    for (int h = 0; h < hosts; ++h) as.createHost("host" + std::to_string(h)).joinNetwork("net" + std::to_string(pick(0, nets - 1)));
  }
  emulator.addLayer(base);
  if (pick(0, 1) == 1) emulator.addLayer(std::make_shared<emu::Routing>());
  return emulator;
}

TEST(Labels, EveryContainerCarriesMetadata) {
  auto rendered = fixture::morris(1).render();
  auto manifest = emu::buildManifest(rendered);
  for (const auto& spec : manifest.services) {
    for (const char* key : {"emu.node.name", "emu.node.asn", "emu.node.role", "emu.node.displayname",
                            "emu.node.description"}) {
      EXPECT_TRUE(spec.labels.count(key)) << spec.name << " " << key;
    }
    for (size_t i = 0; i < spec.attachments.size(); ++i) {
      const std::string prefix = "emu.net." + std::to_string(i) + ".";
      EXPECT_EQ(spec.labels.at(prefix + "name"), spec.attachments[i].network);
      EXPECT_EQ(spec.labels.at(prefix + "address"), spec.attachments[i].address.toString());
    }
  }
}

TEST(Labels, DisplayNameAndDescription) {
  emu::Emulator emulator;
  auto base = std::make_shared<emu::Base>();
  auto& as = base->createAutonomousSystem(150);
  as.createNetwork("net0");
  as.createHost("host0").joinNetwork("net0").setDisplayName("Web server").setDescription("serves \"pages\"");
  emulator.addLayer(base);
  auto manifest = emu::buildManifest(emulator.render());
  const auto& labels = manifest.findService("as150h-host0")->labels;
  EXPECT_EQ(labels.at("emu.node.displayname"), "Web server");
  EXPECT_EQ(labels.at("emu.node.description"), "serves \"pages\"");
  EXPECT_EQ(labels.at("emu.node.role"), "host");
  EXPECT_EQ(labels.at("emu.node.asn"), "150");
  const YAML::Node root = YAML::Load(manifest.yaml());
  EXPECT_EQ(root["services"]["as150h-host0"]["labels"]["emu.node.description"].as<std::string>(), "serves \"pages\"");
}

TEST(Recipe, StageOrder) {
  emu::Emulator emulator;
  auto base = std::make_shared<emu::Base>();
  auto& as = base->createAutonomousSystem(150);
  as.createNetwork("net0");
  as.createHost("host0")
      .joinNetwork("net0")
      .addSoftware("telnetd")
      .setFile("payload", "/bof/server")
      .addBuildCommand("useradd -m seed")
      .appendStartCommand("cd /bof && /bof/server &");
  emulator.addLayer(base);
  auto manifest = emu::buildManifest(emulator.render());
  const auto& spec = *manifest.findService("as150h-host0");
  const std::string dockerfile = spec.dockerfile();
  const auto install = dockerfile.find("apt-get install");
  const auto copy = dockerfile.find("COPY file_0 /bof/server");
  const auto build = dockerfile.find("RUN useradd -m seed");
  const auto start = dockerfile.find("COPY start.sh");
  ASSERT_NE(install, std::string::npos);
  ASSERT_NE(copy, std::string::npos);
  ASSERT_NE(build, std::string::npos);
  ASSERT_NE(start, std::string::npos);
  EXPECT_LT(install, copy);
  EXPECT_LT(copy, build);
  EXPECT_LT(build, start);
  EXPECT_NE(dockerfile.find(" telnetd"), std::string::npos);
  EXPECT_EQ(dockerfile.rfind("FROM ubuntu:22.04\n", 0), 0u);
  EXPECT_EQ(spec.startScript.find("useradd"), std::string::npos);
}

TEST(Recipe, BaseImageConfigurable) {
  emu::Emulator emulator;
  auto base = std::make_shared<emu::Base>();
  base->createAutonomousSystem(150).createNetwork("net0");
  base->getAutonomousSystem(150).createHost("h").joinNetwork("net0");
  emulator.addLayer(base);
  emu::CompileOptions options;
  options.baseImage = "debian:12-slim";
  auto manifest = emu::buildManifest(emulator.render(), options);
  EXPECT_EQ(manifest.services.at(0).dockerfile().rfind("FROM debian:12-slim\n", 0), 0u);
}

TEST(Containers, MorrisCounts) {
  auto rendered = fixture::morris(1).render();
  const auto dir = scratchDir("morris");
  auto manifest = emu::compileContainers(rendered, dir);
  EXPECT_EQ(manifest.services.size(), 275u);
  EXPECT_EQ(rendered.nodes().size(), 275u);
  size_t hosts = 0;
  for (const auto& spec : manifest.services) hosts += spec.labels.at("emu.node.role") == "host";
  EXPECT_EQ(hosts, 240u);
  size_t dirs = 0;
  for (const auto& entry : fs::directory_iterator(dir)) dirs += entry.is_directory();
  EXPECT_EQ(dirs, 275u);
  fs::remove_all(dir);
}

TEST(Containers, EmptyEmulator) {
  emu::Emulator emulator;
  auto rendered = emulator.render();
  const auto dir = scratchDir("empty");
  auto manifest = emu::compileContainers(rendered, dir);
  EXPECT_TRUE(manifest.services.empty());
  EXPECT_TRUE(manifest.networks.empty());
  const YAML::Node root = YAML::LoadFile((dir / emu::kManifestFile).string());
  EXPECT_EQ(root["services"].size(), 0u);
  EXPECT_EQ(root["networks"].size(), 0u);
  fs::remove_all(dir);
}

TEST(Containers, AttachmentsReferenceDeclaredNetworks) {
  auto rendered = fixture::morris(1).render();
  auto manifest = emu::buildManifest(rendered);
  std::set<std::string> declared;
  for (const auto& network : manifest.networks) declared.insert(network.key);
  for (const auto& spec : manifest.services) {
    for (const auto& attachment : spec.attachments) EXPECT_TRUE(declared.count(attachment.network)) << spec.name;
  }
}

TEST(Containers, RoundTripTriples) {
  for (uint64_t seed : {1u, 2u}) {
    auto rendered = fixture::morris(seed).render();
    const auto dir = scratchDir("triples");
    emu::compileContainers(rendered, dir);
    EXPECT_EQ(manifestTriples(oracle::readFile(dir / emu::kManifestFile)), modelTriples(rendered));
    fs::remove_all(dir);
  }
}

TEST(Containers, DeterministicBytes) {
  const auto a = scratchDir("det-a");
  const auto b = scratchDir("det-b");
  emu::compileContainers(fixture::morris(4).render(), a);
  emu::compileContainers(fixture::morris(4).render(), b);
  EXPECT_EQ(oracle::treeDigest(a), oracle::treeDigest(b));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Containers, OutputDirectoryRules) {
  auto rendered = fixture::transitExample().render();
  const auto dir = scratchDir("rules");
  emu::compileContainers(rendered, dir);
  EXPECT_EQ(codeOf([&] { emu::compileContainers(rendered, dir); }), emu::ErrorCode::kIoError);
  emu::CompileOptions overwrite;
  overwrite.overwrite = true;
  emu::compileContainers(rendered, dir, overwrite);
  EXPECT_TRUE(fs::exists(dir / "as2r-r0" / "Dockerfile"));
  EXPECT_TRUE(fs::exists(dir / "as2r-r0" / "start.sh"));
  EXPECT_NE(fs::status(dir / "as2r-r0" / "start.sh").permissions() & fs::perms::owner_exec, fs::perms::none);
  fs::remove_all(dir);
}

TEST(Graph, TransitExample) {
  auto rendered = fixture::transitExample().render();
  const std::string dot = emu::compileGraph(rendered);
  auto graph = parseDot(dot);
  EXPECT_EQ(countKind(graph, "node"), 4u);
  EXPECT_EQ(countKind(graph, "network"), 6u);
  EXPECT_NE(dot.find("subgraph cluster_as2"), std::string::npos);
  // Chain: ix100 - r0 - net0 - r1 - net1 - r2 - net2 - r3 - ix102, r1 - ix101.
  std::set<std::pair<std::string, std::string>> edges;
  for (auto e : boost::make_iterator_range(boost::edges(graph))) {
    std::string a = graph[boost::source(e, graph)].name;
    std::string b = graph[boost::target(e, graph)].name;
    edges.emplace(a, b);
  }
  const std::set<std::pair<std::string, std::string>> expected = {
      {"as2r-r0", "net_ix_ix100"}, {"as2r-r0", "net_2_net0"}, {"as2r-r1", "net_2_net0"},
      {"as2r-r1", "net_2_net1"},   {"as2r-r1", "net_ix_ix101"}, {"as2r-r2", "net_2_net1"},
      {"as2r-r2", "net_2_net2"},   {"as2r-r3", "net_2_net2"},   {"as2r-r3", "net_ix_ix102"}};
  EXPECT_EQ(edges, expected);
}

TEST(Graph, EmptyEmulator) {
  emu::Emulator emulator;
  auto graph = parseDot(emu::compileGraph(emulator.render()));
  EXPECT_EQ(boost::num_vertices(graph), 0u);
}

TEST(Graph, NodeCountMatchesRegistryOnRandomFixtures) {
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    auto rendered = randomFixture(seed).render();
    auto graph = parseDot(emu::compileGraph(rendered));
    EXPECT_EQ(countKind(graph, "node"), rendered.registry().count("node")) << seed;
    EXPECT_EQ(countKind(graph, "node"), rendered.nodes().size()) << seed;
    EXPECT_EQ(countKind(graph, "network"), rendered.networks().size()) << seed;
    size_t interfaces = 0;
    for (const emu::Node* node : rendered.nodes()) interfaces += node->interfaces().size();
    EXPECT_EQ(boost::num_edges(graph), interfaces) << seed;
  }
}

TEST(Graph, NotRendered) {
  EXPECT_EQ(codeOf([] { emu::compileGraph(emu::RenderedEmulation()); }), emu::ErrorCode::kNotRendered);
}

}  // namespace

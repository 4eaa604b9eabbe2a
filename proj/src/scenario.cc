#include "emu/scenario.h"

#include <fstream>

#include "emu/base.h"
#include "emu/component.h"
#include "emu/error.h"
#include "emu/routing.h"

namespace emu {
namespace {

using nlohmann::json;

std::optional<Ipv4Prefix> optionalPrefix(const json& object) {
  if (!object.contains("prefix")) return std::nullopt;
  return Ipv4Prefix::fromString(object.at("prefix").get<std::string>());
}

void joinAll(Node& node, const json& object) {
  for (const auto& attachment : object.value("networks", json::array())) {
    if (attachment.is_string()) {
      node.joinNetwork(attachment.get<std::string>());
    } else {
      node.joinNetwork(attachment.at("name").get<std::string>(), attachment.value("address", std::string("auto")));
    }
  }
}

void customize(Node& node, const json& object, const std::filesystem::path& baseDir) {
  joinAll(node, object);
  for (const auto& package : object.value("software", json::array())) node.addSoftware(package.get<std::string>());
  for (const auto& file : object.value("files", json::array())) {
    const std::string path = file.at("path").get<std::string>();
    if (file.contains("content")) {
      node.setFile(file.at("content").get<std::string>(), path);
    } else {
      std::filesystem::path source = file.at("source").get<std::string>();
      node.importFile(source.is_absolute() ? source : baseDir / source, path);
    }
  }
  for (const auto& command : object.value("buildCommands", json::array())) {
    node.addBuildCommand(command.get<std::string>());
  }
  for (const auto& command : object.value("startCommands", json::array())) {
    node.appendStartCommand(command.get<std::string>());
  }
  if (object.contains("displayName")) node.setDisplayName(object.at("displayName").get<std::string>());
  if (object.contains("description")) node.setDescription(object.at("description").get<std::string>());
}

PeerRelationship parseRelationship(const std::string& text) {
  if (text == "Provider") return PeerRelationship::kProvider;
  if (text == "Peer") return PeerRelationship::kPeer;
  if (text == "Unfiltered") return PeerRelationship::kUnfiltered;
  throw Error(ErrorCode::kInvalidArgument, "unknown relationship '" + text + "'");
}

void buildBase(Base& base, const json& document, const std::filesystem::path& baseDir) {
  for (const auto& ix : document.value("internetExchanges", json::array())) {
    base.createInternetExchange(ix.at("id").get<int>(), optionalPrefix(ix));
  }
  for (const auto& entry : document.value("autonomousSystems", json::array())) {
    AutonomousSystem& as = base.createAutonomousSystem(entry.at("asn").get<int>());
    for (const auto& net : entry.value("networks", json::array())) {
      Network& network = as.createNetwork(net.at("name").get<std::string>(), optionalPrefix(net));
      if (net.contains("remoteAccess")) {
        RemoteAccessSpec spec;
        spec.exposedPort = net.at("remoteAccess").value("port", spec.exposedPort);
        network.enableRemoteAccess(spec);
      }
    }
    for (const auto& router : entry.value("routers", json::array())) {
      customize(as.createRouter(router.at("name").get<std::string>()), router, baseDir);
    }
    for (const auto& router : entry.value("realWorldRouters", json::array())) {
      std::vector<Ipv4Prefix> prefixes;
      for (const auto& prefix : router.value("prefixes", json::array())) {
        prefixes.push_back(Ipv4Prefix::fromString(prefix.get<std::string>()));
      }
      Node& node = as.createRealWorldRouter(router.at("name").get<std::string>(), PrefixSource::fromList(prefixes));
      customize(node, router, baseDir);
    }
    for (const auto& host : entry.value("hosts", json::array())) {
      customize(as.createHost(host.at("name").get<std::string>()), host, baseDir);
    }
  }
}

Binding parseBinding(const json& entry) {
  Binding binding;
  binding.vnode = entry.at("vnode").get<std::string>();
  const json filter = entry.value("filter", json::object());
  if (filter.contains("asn")) binding.filter.asn = filter.at("asn").get<int>();
  if (filter.contains("nodeName")) binding.filter.nodeName = filter.at("nodeName").get<std::string>();
  if (filter.contains("ip")) binding.filter.ip = Ipv4Address::fromString(filter.at("ip").get<std::string>());
  binding.filter.allowReuse = filter.value("allowReuse", false);
  const std::string action = entry.value("action", std::string("first"));
  auto parsed = parseAction(action);
  if (!parsed) throw Error(ErrorCode::kInvalidArgument, "unknown binding action '" + action + "'");
  binding.action = *parsed;
  return binding;
}

}  // namespace

Emulator buildScenario(const json& document, const std::filesystem::path& baseDir, std::optional<uint64_t> seed) {
  try {
    Emulator emulator(seed.value_or(document.value("seed", uint64_t{0})));
    auto base = std::make_shared<Base>();
    buildBase(*base, document, baseDir);
    emulator.addLayer(base);
    if (document.value("routing", false)) emulator.addLayer(std::make_shared<Routing>());
    if (document.contains("ebgp")) {
      auto ebgp = std::make_shared<Ebgp>();
      const json& spec = document.at("ebgp");
      for (const auto& peering : spec.value("privatePeerings", json::array())) {
        ebgp->addPrivatePeerings(peering.at("ix").get<int>(), peering.at("left").get<std::vector<int>>(),
                                 peering.at("right").get<std::vector<int>>(),
                                 parseRelationship(peering.value("relationship", std::string("Peer"))));
      }
      for (const auto& rs : spec.value("rsPeers", json::array())) {
        ebgp->addRsPeers(rs.at("ix").get<int>(), rs.at("asns").get<std::vector<int>>());
      }
      emulator.addLayer(ebgp);
    }
    for (const auto& path : document.value("components", json::array())) {
      std::filesystem::path file = path.get<std::string>();
      for (auto& layer : Emulator::importComponent(file.is_absolute() ? file : baseDir / file)) {
        emulator.addLayer(layer);
      }
    }
    if (document.contains("services")) {
      json component = {{"componentVersion", kComponentVersion},
                        {"layers", document.at("services")},
                        {"virtualNodes", json::array()}};
      for (auto& layer : Emulator::parseComponent(component)) emulator.addLayer(layer);
    }
    for (const auto& binding : document.value("bindings", json::array())) emulator.addBinding(parseBinding(binding));
    return emulator;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("scenario: ") + e.what());
  }
}

Emulator loadScenario(const std::filesystem::path& file, std::optional<uint64_t> seed) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + file.string());
  json document = json::parse(in, nullptr, false);
  if (document.is_discarded()) throw Error(ErrorCode::kInvalidArgument, file.string() + " is not valid JSON");
  return buildScenario(document, file.parent_path(), seed);
}

}  // namespace emu

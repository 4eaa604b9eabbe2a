#include "emu/mapd/topology.h"

#include <algorithm>
#include <charconv>

#include <yaml-cpp/yaml.h>

#include "emu/compile.h"
#include "emu/error.h"

namespace emu::mapd {

const TopologyNode* TopologyDocument::find(std::string_view id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                             [](const TopologyNode& node, std::string_view key) { return node.id < key; });
  return it != nodes.end() && it->id == id ? &*it : nullptr;
}

nlohmann::json nodeJson(const TopologyNode& node) {
  nlohmann::ordered_json out;
  out["id"] = node.id;
  out["name"] = node.name;
  out["asn"] = node.asn;
  out["role"] = node.role;
  out["displayName"] = node.displayName;
  out["description"] = node.description;
  auto& attachments = out["attachments"] = nlohmann::ordered_json::array();
  for (const auto& a : node.attachments) {
    attachments.push_back({{"network", a.network}, {"address", a.address}, {"prefix", a.prefix}});
  }
  if (node.running) out["running"] = *node.running;
  return out;
}

nlohmann::json TopologyDocument::toJson() const {
  nlohmann::ordered_json out;
  auto& nodeList = out["nodes"] = nlohmann::ordered_json::array();
  for (const auto& node : nodes) nodeList.push_back(nlohmann::ordered_json(nodeJson(node)));
  auto& edgeList = out["edges"] = nlohmann::ordered_json::array();
  for (const auto& edge : edges) edgeList.push_back({{"nodeId", edge.nodeId}, {"network", edge.network}});
  auto& networkList = out["networks"] = nlohmann::ordered_json::array();
  for (const auto& net : networks) {
    networkList.push_back({{"name", net.name}, {"prefix", net.prefix}, {"scope", net.scope}});
  }
  return out;
}

namespace {

const std::string& requireLabel(const LabeledContainer& container, const std::string& key) {
  auto it = container.labels.find(key);
  if (it == container.labels.end()) {
    throw Error(ErrorCode::kMissingLabels, container.id + " has no " + key + " label");
  }
  return it->second;
}

std::string labelOr(const std::map<std::string, std::string>& labels, const std::string& key, std::string fallback) {
  auto it = labels.find(key);
  return it == labels.end() ? std::move(fallback) : it->second;
}

}  // namespace

TopologyDocument buildTopology(std::vector<LabeledContainer> containers, const std::vector<LabeledNetwork>& networks) {
  std::sort(containers.begin(), containers.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  TopologyDocument doc;
  for (const auto& container : containers) {
    TopologyNode node;
    node.id = container.id;
    node.name = requireLabel(container, "emu.node.name");
    const std::string& asn = requireLabel(container, "emu.node.asn");
    auto [ptr, ec] = std::from_chars(asn.data(), asn.data() + asn.size(), node.asn);
    if (ec != std::errc() || ptr != asn.data() + asn.size()) {
      throw Error(ErrorCode::kMissingLabels, container.id + " has a malformed emu.node.asn label");
    }
    node.role = requireLabel(container, "emu.node.role");
    node.displayName = labelOr(container.labels, "emu.node.displayname", node.name);
    node.description = labelOr(container.labels, "emu.node.description", "");
    for (int i = 0;; ++i) {
      const std::string prefix = "emu.net." + std::to_string(i) + ".";
      auto name = container.labels.find(prefix + "name");
      if (name == container.labels.end()) break;
      node.attachments.push_back({name->second, requireLabel(container, prefix + "address"),
                                  labelOr(container.labels, prefix + "prefix", "")});
      doc.edges.push_back({node.id, name->second});
    }
    node.running = container.running;
    if (!doc.nodes.empty() && doc.nodes.back().id == node.id) {
      throw Error(ErrorCode::kMissingLabels, "duplicate container id " + node.id);
    }
    doc.nodes.push_back(std::move(node));
  }
  for (const auto& network : networks) {
    auto key = network.labels.find("emu.net.key");
    if (key == network.labels.end()) continue;
    doc.networks.push_back({key->second, labelOr(network.labels, "emu.net.prefix", network.subnet),
                            labelOr(network.labels, "emu.net.scope", "")});
  }
  std::sort(doc.networks.begin(), doc.networks.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return doc;
}

namespace {

std::map<std::string, std::string> readLabels(const YAML::Node& node) {
  std::map<std::string, std::string> labels;
  if (!node) return labels;
  if (node.IsMap()) {
    for (const auto& entry : node) labels[entry.first.as<std::string>()] = entry.second.as<std::string>("");
  } else if (node.IsSequence()) {
    for (const auto& entry : node) {
      const std::string text = entry.as<std::string>();
      const size_t eq = text.find('=');
      labels[text.substr(0, eq)] = eq == std::string::npos ? "" : text.substr(eq + 1);
    }
  }
  return labels;
}

}  // namespace

TopologyDocument loadTopologyFromManifest(const std::filesystem::path& path) {
  const std::filesystem::path file = std::filesystem::is_directory(path) ? path / kManifestFile : path;
  YAML::Node root;
  try {
    root = YAML::LoadFile(file.string());
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kSourceUnavailable, file.string() + ": " + e.what());
  }
  std::vector<LabeledContainer> containers;
  std::vector<LabeledNetwork> networks;
  try {
    if (const YAML::Node services = root["services"]) {
      for (const auto& entry : services) {
        LabeledContainer container;
        container.id = entry.second["container_name"] ? entry.second["container_name"].as<std::string>()
                                                     : entry.first.as<std::string>();
        container.labels = readLabels(entry.second["labels"]);
        containers.push_back(std::move(container));
      }
    }
    if (const YAML::Node nets = root["networks"]) {
      for (const auto& entry : nets) {
        LabeledNetwork network;
        network.key = entry.first.as<std::string>();
        const YAML::Node ipam = entry.second.IsMap() ? entry.second["ipam"] : YAML::Node();
        if (const YAML::Node config = ipam && ipam.IsMap() ? ipam["config"] : YAML::Node();
            config && config.IsSequence() && config.size()) {
          network.subnet = config[0]["subnet"].as<std::string>("");
        }
        network.labels = readLabels(entry.second.IsMap() ? entry.second["labels"] : YAML::Node());
        networks.push_back(std::move(network));
      }
    }
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kSourceUnavailable, file.string() + ": " + e.what());
  }
  return buildTopology(std::move(containers), networks);
}

}  // namespace emu::mapd

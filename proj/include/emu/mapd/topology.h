#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace emu::mapd {

struct NodeAttachment {
  std::string network;
  std::string address;
  std::string prefix;
};

struct TopologyNode {
  /// Container name.
  std::string id;
  std::string name;
  int asn = 0;
  std::string role;
  std::string displayName;
  std::string description;
  std::vector<NodeAttachment> attachments;
  /// Live mode only.
  std::optional<bool> running;
};

struct TopologyNetwork {
  std::string name;
  std::string prefix;
  std::string scope;
};

struct TopologyEdge {
  std::string nodeId;
  std::string network;
};

struct TopologyDocument {
  std::vector<TopologyNode> nodes;
  std::vector<TopologyEdge> edges;
  std::vector<TopologyNetwork> networks;

  const TopologyNode* find(std::string_view id) const;
  nlohmann::json toJson() const;
};

nlohmann::json nodeJson(const TopologyNode& node);

/// A container as seen by a topology source: its name, labels and state.
struct LabeledContainer {
  std::string id;
  std::map<std::string, std::string> labels;
  std::optional<bool> running;
};

struct LabeledNetwork {
  std::string key;
  std::string subnet;
  std::map<std::string, std::string> labels;
};

/// Builds the document from labels alone. Throws MissingLabels when a
/// container lacks a required emu.node.* label.
TopologyDocument buildTopology(std::vector<LabeledContainer> containers, const std::vector<LabeledNetwork>& networks);

/// Reads a compiled output directory (or the manifest file itself).
/// Throws SourceUnavailable / MissingLabels.
TopologyDocument loadTopologyFromManifest(const std::filesystem::path& path);

}  // namespace emu::mapd

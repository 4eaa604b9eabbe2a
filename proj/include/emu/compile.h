#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "emu/emulator.h"
#include "emu/ipv4.h"

namespace emu {

struct ContainerAttachment {
  /// Compose network key (Network::qualifiedName()).
  std::string network;
  std::string interface;
  Ipv4Address address;
  Ipv4Prefix prefix;
};

struct StagedFile {
  /// Name inside the build context: file_{i}.
  std::string contextName;
  std::string nodePath;
  std::string content;
};

struct ContainerSpec {
  std::string name;
  std::string image;
  /// Node::key() of the emulated node; empty for service containers.
  std::string nodeKey;
  std::vector<std::string> buildSteps;
  std::vector<StagedFile> files;
  std::string startScript;
  std::vector<ContainerAttachment> attachments;
  std::map<std::string, std::string> labels;
  std::vector<std::string> ports;
  std::map<std::string, std::string> sysctls;
  std::vector<std::string> capAdd;
  /// Also attached to the non-internal bridge (real-world routers).
  bool external = false;

  std::string dockerfile() const;
};

struct ManifestNetwork {
  std::string key;
  Ipv4Prefix prefix;
  std::map<std::string, std::string> labels;
};

struct ManifestDocument {
  std::vector<ContainerSpec> services;
  std::vector<ManifestNetwork> networks;

  const ContainerSpec* findService(std::string_view name) const;
  /// Compose YAML.
  std::string yaml() const;
};

struct CompileOptions {
  std::string baseImage = "ubuntu:22.04";
  /// Clear a non-empty output directory instead of failing.
  bool overwrite = false;
};

inline constexpr const char* kManifestFile = "docker-compose.yml";
inline constexpr const char* kExternalNetwork = "net_external";

/// In-memory compile; importFile sources are read here (IoError).
ManifestDocument buildManifest(const RenderedEmulation& rendered, const CompileOptions& options = {});

/// Writes the compose manifest plus one build context per container.
ManifestDocument compileContainers(const RenderedEmulation& rendered, const std::filesystem::path& outDir,
                                   const CompileOptions& options = {});

/// Graphviz DOT: ASes as clusters, one vertex per node (kind="node") and per
/// network (kind="network"), one edge per interface.
std::string compileGraph(const RenderedEmulation& rendered);

}  // namespace emu

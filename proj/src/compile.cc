#include "emu/compile.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "emu/error.h"
#include "emu/routing.h"

namespace emu {
namespace fs = std::filesystem;

namespace {

const char* const kBasePackages = "iproute2 iptables tcpdump";

const char* const kRenameFunction =
    "rename_if() {\n"
    "    cur=$(ip -o -4 addr show | awk -v a=\"$1\" '{split($4, p, \"/\"); if (p[1] == a) {print $2; exit}}')\n"
    "    if [ -n \"$cur\" ] && [ \"$cur\" != \"$2\" ]; then\n"
    "        ip link set dev \"$cur\" down\n"
    "        ip link set dev \"$cur\" name \"$2\"\n"
    "        ip link set dev \"$2\" up\n"
    "    fi\n"
    "}\n";

const char* const kExternalSetup =
    "ext=$(ip route show default | awk '{print $5; exit}')\n"
    "gw=$(ip route show default | awk '{print $3; exit}')\n"
    "if [ -n \"$ext\" ] && [ \"$ext\" != ext0 ]; then\n"
    "    ip link set dev \"$ext\" down\n"
    "    ip link set dev \"$ext\" name ext0\n"
    "    ip link set dev ext0 up\n"
    "    ip route replace default via \"$gw\" dev ext0\n"
    "fi\n"
    "iptables -t nat -A POSTROUTING -o ext0 -j MASQUERADE\n";

std::string readHostFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream content;
  content << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return content.str();
}

std::string maskText(const Ipv4Prefix& prefix) { return Ipv4Address(prefix.mask()).toString(); }

void finishBuild(ContainerSpec& spec, const std::set<std::string>& software,
                 const std::vector<std::string>& buildCommands) {
  spec.buildSteps.push_back("ARG DEBIAN_FRONTEND=noninteractive");
  std::string install = std::string("RUN apt-get update && apt-get install -y --no-install-recommends ") + kBasePackages;
  for (const auto& package : software) install += " " + package;
  install += " && rm -rf /var/lib/apt/lists/*";
  spec.buildSteps.push_back(std::move(install));
  for (const auto& file : spec.files) spec.buildSteps.push_back("COPY " + file.contextName + " " + file.nodePath);
  for (const auto& command : buildCommands) spec.buildSteps.push_back("RUN " + command);
  spec.buildSteps.push_back("COPY start.sh /start.sh");
  spec.buildSteps.push_back("RUN chmod +x /start.sh");
  spec.buildSteps.push_back(R"(CMD ["/bin/bash", "-c", "/start.sh; exec tail -f /dev/null"])");
}

void stage(ContainerSpec& spec, std::string nodePath, std::string content) {
  spec.files.push_back({"file_" + std::to_string(spec.files.size()), std::move(nodePath), std::move(content)});
}

std::string startScript(const ContainerSpec& spec, const std::vector<std::string>& sections) {
  std::ostringstream out;
  out << "#!/bin/bash\n# " << spec.name << "\n";
  if (!spec.attachments.empty()) {
    out << kRenameFunction;
    for (const auto& attachment : spec.attachments) {
      out << "rename_if " << attachment.address.toString() << " " << attachment.interface << "\n";
    }
  }
  for (const auto& line : sections) out << line << "\n";
  return out.str();
}

void routerSysctls(ContainerSpec& spec) {
  spec.sysctls["net.ipv4.ip_forward"] = "1";
  spec.sysctls["net.ipv4.conf.all.rp_filter"] = "0";
  spec.sysctls["net.ipv4.conf.default.rp_filter"] = "0";
}

ContainerSpec nodeContainer(const RenderedEmulation& rendered, const Node& node, const CompileOptions& options) {
  ContainerSpec spec;
  spec.name = node.containerName();
  spec.image = options.baseImage;
  spec.nodeKey = node.key();
  spec.capAdd = {"NET_ADMIN"};
  spec.external = node.role() == NodeRole::kRealWorldRouter;

  const auto names = interfaceNames(node);
  for (size_t i = 0; i < node.interfaces().size(); ++i) {
    const auto& iface = node.interfaces()[i];
    spec.attachments.push_back({iface.network->qualifiedName(), names[i], iface.address, iface.network->prefix()});
  }

  spec.labels["emu.node.name"] = node.name();
  spec.labels["emu.node.key"] = node.key();
  spec.labels["emu.node.asn"] = std::to_string(node.asn());
  spec.labels["emu.node.role"] = std::string(nodeRoleName(node.role()));
  spec.labels["emu.node.displayname"] = node.displayName().empty() ? node.name() : node.displayName();
  spec.labels["emu.node.description"] = node.description();
  for (size_t i = 0; i < spec.attachments.size(); ++i) {
    const auto& attachment = spec.attachments[i];
    const std::string prefix = "emu.net." + std::to_string(i) + ".";
    spec.labels[prefix + "name"] = attachment.network;
    spec.labels[prefix + "address"] = attachment.address.toString();
    spec.labels[prefix + "prefix"] = attachment.prefix.toString();
    spec.labels[prefix + "scope"] = node.interfaces()[i].network->scope();
  }

  if (auto config = emitRouterConfig(rendered, node)) stage(spec, kBirdConfigPath, std::move(*config));
  for (const auto& file : node.files()) {
    stage(spec, file.nodePath, file.content ? *file.content : readHostFile(*file.hostPath));
  }
  if (!node.isHost()) routerSysctls(spec);

  std::vector<std::string> sections;
  if (spec.external) sections.push_back(kExternalSetup);
  for (auto& command : routingStartCommands(rendered, node)) sections.push_back(std::move(command));
  for (const auto& command : node.startCommands()) sections.push_back(command);
  spec.startScript = startScript(spec, sections);
  finishBuild(spec, node.software(), node.buildCommands());
  return spec;
}

ContainerSpec vpnContainer(const Network& network, const CompileOptions& options) {
  const RemoteAccessSpec& access = *network.remoteAccess();
  const Ipv4Address address = *network.remoteAccessAddress();
  const Ipv4Prefix prefix = network.prefix();

  ContainerSpec spec;
  spec.name = "as" + std::to_string(network.scopeId()) + "vpn-" + network.name();
  spec.image = options.baseImage;
  spec.capAdd = {"NET_ADMIN"};
  spec.attachments.push_back({network.qualifiedName(), "if0", address, prefix});
  spec.ports.push_back(std::to_string(access.exposedPort) + ":1194/udp");
  spec.labels["emu.node.name"] = "vpn-" + network.name();
  spec.labels["emu.node.key"] = "";
  spec.labels["emu.node.asn"] = std::to_string(network.scopeId());
  spec.labels["emu.node.role"] = "vpn";
  spec.labels["emu.node.displayname"] = "VPN " + network.name();
  spec.labels["emu.node.description"] = "remote access to " + network.qualifiedName();
  spec.labels["emu.net.0.name"] = network.qualifiedName();
  spec.labels["emu.net.0.address"] = address.toString();
  spec.labels["emu.net.0.prefix"] = prefix.toString();
  spec.labels["emu.net.0.scope"] = network.scope();

  // Client pool: free addresses from 200/256 of the way into the prefix.
  std::set<Ipv4Address> used = {address};
  for (const auto& [node, attached] : network.attachments()) used.insert(attached);
  std::vector<Ipv4Address> pool;
  for (uint64_t offset = prefix.size() * 200 / 256; offset + 1 < prefix.size() && pool.size() < 8; ++offset) {
    Ipv4Address candidate = prefix.at(static_cast<uint32_t>(offset));
    if (offset > 0 && !used.contains(candidate)) pool.push_back(candidate);
  }

  std::ostringstream conf;
  conf << "port 1194\nproto udp\ndev tap0\nmode server\ntls-server\n";
  if (!pool.empty()) {
    conf << "server-bridge " << address.toString() << " " << maskText(prefix) << " " << pool.front().toString() << " "
         << pool.back().toString() << "\n";
  }
  conf << "ca /etc/openvpn/server.crt\ncert /etc/openvpn/server.crt\nkey /etc/openvpn/server.key\ndh none\n"
       << "verify-client-cert none\nusername-as-common-name\nscript-security 2\n"
       << "auth-user-pass-verify /bin/true via-env\nduplicate-cn\nkeepalive 10 60\npersist-tun\n";
  stage(spec, "/etc/openvpn/server.conf", conf.str());

  const std::string cidr = address.toString() + "/" + std::to_string(prefix.length());
  spec.startScript = startScript(spec, {
                                           "openvpn --mktun --dev tap0",
                                           "ip link add br0 type bridge",
                                           "ip link set tap0 master br0",
                                           "ip addr flush dev if0",
                                           "ip link set if0 master br0",
                                           "ip addr add " + cidr + " dev br0",
                                           "ip link set tap0 up",
                                           "ip link set br0 up",
                                           "openvpn --config /etc/openvpn/server.conf --daemon",
                                       });
  finishBuild(spec, {"openvpn", "openssl"},
              {"openssl req -x509 -newkey rsa:2048 -nodes -days 3650 -subj /CN=emu-vpn "
               "-keyout /etc/openvpn/server.key -out /etc/openvpn/server.crt"});
  return spec;
}

void writeFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

std::string dotQuote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string ContainerSpec::dockerfile() const {
  std::string out = "FROM " + image + "\n";
  for (const auto& step : buildSteps) out += step + "\n";
  return out;
}

const ContainerSpec* ManifestDocument::findService(std::string_view name) const {
  for (const auto& service : services) {
    if (service.name == name) return &service;
  }
  return nullptr;
}

std::string ManifestDocument::yaml() const {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "services" << YAML::Value << YAML::BeginMap;
  for (const auto& service : services) {
    out << YAML::Key << service.name << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "build" << YAML::Value << ("./" + service.name);
    out << YAML::Key << "container_name" << YAML::Value << service.name;
    out << YAML::Key << "cap_add" << YAML::Value << YAML::Flow << service.capAdd;
    if (!service.sysctls.empty()) {
      out << YAML::Key << "sysctls" << YAML::Value << YAML::BeginMap;
      for (const auto& [key, value] : service.sysctls) {
        out << YAML::Key << key << YAML::Value << YAML::DoubleQuoted << value;
      }
      out << YAML::EndMap;
    }
    if (!service.ports.empty()) {
      out << YAML::Key << "ports" << YAML::Value << YAML::BeginSeq;
      for (const auto& port : service.ports) out << YAML::DoubleQuoted << port;
      out << YAML::EndSeq;
    }
    out << YAML::Key << "networks" << YAML::Value << YAML::BeginMap;
    for (const auto& attachment : service.attachments) {
      out << YAML::Key << attachment.network << YAML::Value << YAML::BeginMap;
      out << YAML::Key << "ipv4_address" << YAML::Value << attachment.address.toString();
      out << YAML::EndMap;
    }
    if (service.external) out << YAML::Key << kExternalNetwork << YAML::Value << YAML::BeginMap << YAML::EndMap;
    out << YAML::EndMap;
    out << YAML::Key << "labels" << YAML::Value << YAML::BeginMap;
    for (const auto& [key, value] : service.labels) {
      out << YAML::Key << key << YAML::Value << YAML::DoubleQuoted << value;
    }
    out << YAML::EndMap;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  const bool external = std::any_of(services.begin(), services.end(), [](const auto& s) { return s.external; });
  out << YAML::Key << "networks" << YAML::Value << YAML::BeginMap;
  for (const auto& network : networks) {
    out << YAML::Key << network.key << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "driver" << YAML::Value << "bridge";
    out << YAML::Key << "internal" << YAML::Value << true;
    out << YAML::Key << "ipam" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "config" << YAML::Value << YAML::BeginSeq;
    out << YAML::BeginMap << YAML::Key << "subnet" << YAML::Value << network.prefix.toString() << YAML::EndMap;
    out << YAML::EndSeq << YAML::EndMap;
    out << YAML::Key << "labels" << YAML::Value << YAML::BeginMap;
    for (const auto& [key, value] : network.labels) {
      out << YAML::Key << key << YAML::Value << YAML::DoubleQuoted << value;
    }
    out << YAML::EndMap;
    out << YAML::EndMap;
  }
  if (external) {
    out << YAML::Key << kExternalNetwork << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "driver" << YAML::Value << "bridge";
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

ManifestDocument buildManifest(const RenderedEmulation& rendered, const CompileOptions& options) {
  ManifestDocument manifest;
  std::set<std::string> names;
  auto add = [&](ContainerSpec spec) {
    if (!names.insert(spec.name).second) throw Error(ErrorCode::kNameCollision, spec.name);
    manifest.services.push_back(std::move(spec));
  };
  for (const Node* node : rendered.nodes()) add(nodeContainer(rendered, *node, options));
  for (const Network* network : rendered.networks()) {
    if (network->remoteAccess()) add(vpnContainer(*network, options));
  }

  std::set<std::string> networkKeys;
  for (const Network* network : rendered.networks()) {
    if (!networkKeys.insert(network->qualifiedName()).second) {
      throw Error(ErrorCode::kNameCollision, network->qualifiedName());
    }
    manifest.networks.push_back({network->qualifiedName(),
                                 network->prefix(),
                                 {{"emu.net.key", network->qualifiedName()},
                                  {"emu.net.name", network->name()},
                                  {"emu.net.prefix", network->prefix().toString()},
                                  {"emu.net.scope", network->scope()}}});
  }
  return manifest;
}

ManifestDocument compileContainers(const RenderedEmulation& rendered, const fs::path& outDir,
                                   const CompileOptions& options) {
  ManifestDocument manifest = buildManifest(rendered, options);
  try {
    if (fs::exists(outDir)) {
      if (!fs::is_directory(outDir)) throw Error(ErrorCode::kIoError, outDir.string() + " is not a directory");
      if (!fs::is_empty(outDir)) {
        if (!options.overwrite) throw Error(ErrorCode::kIoError, outDir.string() + " is not empty");
        for (const auto& entry : fs::directory_iterator(outDir)) fs::remove_all(entry.path());
      }
    }
    fs::create_directories(outDir);
    for (const auto& service : manifest.services) {
      const fs::path dir = outDir / service.name;
      fs::create_directory(dir);
      writeFile(dir / "Dockerfile", service.dockerfile());
      writeFile(dir / "start.sh", service.startScript);
      fs::permissions(dir / "start.sh", fs::perms::owner_exec | fs::perms::group_exec | fs::perms::others_exec,
                      fs::perm_options::add);
      for (const auto& file : service.files) writeFile(dir / file.contextName, file.content);
    }
    writeFile(outDir / kManifestFile, manifest.yaml());
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorCode::kIoError, e.what());
  }
  return manifest;
}

std::string compileGraph(const RenderedEmulation& rendered) {
  std::ostringstream out;
  out << "graph emulation {\n";
  auto nodeLine = [&](const Node& node, const char* indent) {
    out << indent << dotQuote(node.containerName()) << " [kind=\"node\", role=" << dotQuote(nodeRoleName(node.role()))
        << ", label=" << dotQuote(node.name()) << ", shape=" << (node.isHost() ? "box" : "diamond") << "];\n";
  };
  auto networkLine = [&](const Network& network, const char* indent) {
    out << indent << dotQuote(network.qualifiedName()) << " [kind=\"network\", label="
        << dotQuote(network.name() + " " + network.prefix().toString())
        << ", shape=" << (network.isExchange() ? "doubleoctagon" : "ellipse") << "];\n";
  };

  const Base& base = rendered.base();
  for (const AutonomousSystem* as : base.autonomousSystems()) {
    out << "  subgraph cluster_as" << as->asn() << " {\n";
    out << "    label=\"AS" << as->asn() << "\";\n";
    for (const Network* network : as->networks()) networkLine(*network, "    ");
    for (const Node* node : as->nodes()) nodeLine(*node, "    ");
    out << "  }\n";
  }
  for (const InternetExchange* ix : base.internetExchanges()) {
    networkLine(ix->network(), "  ");
    if (const Node* rs = ix->routeServer()) nodeLine(*rs, "  ");
  }
  for (const Node* node : rendered.nodes()) {
    for (const auto& iface : node->interfaces()) {
      out << "  " << dotQuote(node->containerName()) << " -- " << dotQuote(iface.network->qualifiedName())
          << " [label=" << dotQuote(iface.address.toString()) << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace emu

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "emu/ipv4.h"
#include "emu/layer.h"
#include "emu/registry.h"

namespace emu {

class AutonomousSystem;
class Base;
class InternetExchange;
class Network;

enum class NodeRole { kHost, kRouter, kRouteServer, kRealWorldRouter };

std::string_view nodeRoleName(NodeRole role);
/// Short role code used in container names: h, r, rs, rw.
std::string_view nodeRoleCode(NodeRole role);

/// Loopbacks live here; no network may overlap it.
inline const Ipv4Prefix kLoopbackRange = Ipv4Prefix(Ipv4Address(10u << 24), 16);

struct NodeInterface {
  const Network* network;
  Ipv4Address address;
};

struct NodeFile {
  std::string nodePath;
  /// Exactly one of content / hostPath is set.
  std::optional<std::string> content;
  std::optional<std::filesystem::path> hostPath;
};

/// Where a real-world router gets the prefixes it announces. The static
/// list is the default; providers are called once per render.
class PrefixSource {
 public:
  using Provider = std::function<std::vector<Ipv4Prefix>()>;

  static PrefixSource fromList(std::vector<Ipv4Prefix> prefixes);
  static PrefixSource fromProvider(std::string name, Provider provider);

  bool isStatic() const { return !provider_; }
  const std::string& name() const { return name_; }
  std::vector<Ipv4Prefix> collect() const;

 private:
  std::string name_ = "static";
  std::vector<Ipv4Prefix> prefixes_;
  Provider provider_;
};

struct RemoteAccessSpec {
  std::string serviceKind = "openvpn";
  int exposedPort = 1194;
};

class Node : public Registrable {
 public:
  const std::string& name() const { return name_; }
  /// Owning ASN, or the exchange id for route servers.
  int asn() const { return asn_; }
  NodeRole role() const { return role_; }
  bool exchangeScoped() const { return role_ == NodeRole::kRouteServer; }
  /// Registry scope: decimal ASN or "ix".
  std::string scope() const;
  /// "<scope>/<name>", unique across the emulation.
  std::string key() const { return scope() + "/" + name_; }
  /// as{asn}{role}-{name}
  std::string containerName() const;

  bool isRouter() const { return role_ == NodeRole::kRouter || role_ == NodeRole::kRealWorldRouter; }
  bool isHost() const { return role_ == NodeRole::kHost; }
  /// A router with at least one interface on an exchange network.
  bool isBgpRouter() const;

  Node& joinNetwork(std::string_view networkName, std::string_view address = "auto");
  Node& joinNetwork(std::string_view networkName, Ipv4Address address);

  Node& addSoftware(std::string package);
  Node& importFile(std::filesystem::path hostPath, std::string nodePath);
  Node& setFile(std::string content, std::string nodePath);
  Node& addBuildCommand(std::string command);
  Node& appendStartCommand(std::string command);
  Node& setDisplayName(std::string displayName);
  Node& setDescription(std::string description);

  const std::vector<NodeInterface>& interfaces() const { return interfaces_; }
  std::optional<Ipv4Address> addressOn(const Network& network) const;
  const std::set<std::string>& software() const { return software_; }
  const std::vector<NodeFile>& files() const { return files_; }
  const std::vector<std::string>& buildCommands() const { return buildCommands_; }
  const std::vector<std::string>& startCommands() const { return startCommands_; }
  const std::string& displayName() const { return displayName_; }
  const std::string& description() const { return description_; }

  /// Prefixes a real-world router announces; filled in at render.
  const std::vector<Ipv4Prefix>& announcedPrefixes() const { return announced_; }
  const PrefixSource* prefixSource() const { return prefixSource_ ? &*prefixSource_ : nullptr; }

  nlohmann::json toJson() const override;

 private:
  friend class AutonomousSystem;
  friend class InternetExchange;
  friend class Base;

  Node(std::string name, int asn, NodeRole role, AutonomousSystem* owner,
       Base* base, std::shared_ptr<CompositionState> state);

  Network& resolveNetwork(std::string_view networkName) const;
  void attach(Network& network, std::optional<Ipv4Address> address);

  std::string name_;
  int asn_;
  NodeRole role_;
  AutonomousSystem* owner_;
  Base* base_;
  std::shared_ptr<CompositionState> state_;
  std::vector<NodeInterface> interfaces_;
  std::set<std::string> software_;
  std::vector<NodeFile> files_;
  std::vector<std::string> buildCommands_;
  std::vector<std::string> startCommands_;
  std::string displayName_;
  std::string description_;
  std::optional<PrefixSource> prefixSource_;
  std::vector<Ipv4Prefix> announced_;
};

class Network : public Registrable {
 public:
  const std::string& name() const { return name_; }
  Ipv4Prefix prefix() const { return prefix_; }
  bool isExchange() const { return exchange_; }
  /// ASN for AS networks, exchange id for exchange networks.
  int scopeId() const { return scopeId_; }
  std::string scope() const { return exchange_ ? "ix" : std::to_string(scopeId_); }
  /// Globally unique name used by compilers: net_{asn}_{name} / net_ix_{name}.
  std::string qualifiedName() const;

  Network& enableRemoteAccess(RemoteAccessSpec spec);
  const std::optional<RemoteAccessSpec>& remoteAccess() const { return remoteAccess_; }
  /// Address of the remote-access server; assigned at render.
  std::optional<Ipv4Address> remoteAccessAddress() const { return remoteAccessAddress_; }

  /// Attached (node, address) pairs in address order.
  std::vector<std::pair<const Node*, Ipv4Address>> attachments() const;

  nlohmann::json toJson() const override;

 private:
  friend class AutonomousSystem;
  friend class InternetExchange;
  friend class Node;
  friend class Base;

  Network(std::string name, Ipv4Prefix prefix, bool exchange, int scopeId, Base* base,
          std::shared_ptr<CompositionState> state);

  Ipv4Address allocate(NodeRole role, int asn);
  Ipv4Address allocateFromPool(bool ascending);
  void claim(Ipv4Address address, const Node* node);

  std::string name_;
  Ipv4Prefix prefix_;
  bool exchange_;
  int scopeId_;
  Base* base_;
  std::shared_ptr<CompositionState> state_;
  std::map<Ipv4Address, const Node*> used_;
  std::optional<RemoteAccessSpec> remoteAccess_;
  std::optional<Ipv4Address> remoteAccessAddress_;
};

class InternetExchange : public Registrable {
 public:
  int id() const { return id_; }
  Network& network() { return *network_; }
  const Network& network() const { return *network_; }

  /// The exchange's route server, created on first use.
  Node& ensureRouteServer();
  const Node* routeServer() const { return routeServer_.get(); }

  nlohmann::json toJson() const override;

 private:
  friend class Base;

  InternetExchange(int id, Ipv4Prefix prefix, Base* base, std::shared_ptr<CompositionState> state);

  int id_;
  Base* base_;
  std::shared_ptr<CompositionState> state_;
  std::unique_ptr<Network> network_;
  std::unique_ptr<Node> routeServer_;
};

class AutonomousSystem : public Registrable {
 public:
  int asn() const { return asn_; }

  Network& createNetwork(std::string name, std::optional<Ipv4Prefix> prefix = std::nullopt);
  Node& createRouter(std::string name);
  Node& createHost(std::string name);
  Node& createRealWorldRouter(std::string name, PrefixSource source);

  Network& getNetwork(std::string_view name);
  const Network& getNetwork(std::string_view name) const;
  Network* findNetwork(std::string_view name);
  const Network* findNetwork(std::string_view name) const;
  Node& getNode(std::string_view name);
  Node& getHost(std::string_view name);
  Node& getRouter(std::string_view name);
  const Node* findNode(std::string_view name) const;
  bool hasNode(std::string_view name) const { return findNode(name) != nullptr; }

  /// Networks in creation order.
  std::vector<const Network*> networks() const;
  std::vector<Network*> networks();
  /// Nodes ordered by name.
  std::vector<const Node*> nodes() const;
  std::vector<Node*> nodes();
  std::vector<const Node*> routers() const;
  std::vector<const Node*> hosts() const;

  nlohmann::json toJson() const override;

 private:
  friend class Base;

  AutonomousSystem(int asn, Base* base, std::shared_ptr<CompositionState> state);
  Node& createNode(std::string name, NodeRole role);

  int asn_;
  Base* base_;
  std::shared_ptr<CompositionState> state_;
  std::vector<std::unique_ptr<Network>> networks_;
  std::map<std::string, std::unique_ptr<Node>, std::less<>> nodes_;
};

/// The base layer: exchanges, autonomous systems, their networks and nodes.
class Base : public Layer {
 public:
  explicit Base(std::string name = "Base");

  std::string typeName() const override { return "Base"; }

  InternetExchange& createInternetExchange(int id, std::optional<Ipv4Prefix> prefix = std::nullopt);
  AutonomousSystem& createAutonomousSystem(int asn);

  AutonomousSystem& getAutonomousSystem(int asn);
  const AutonomousSystem& getAutonomousSystem(int asn) const;
  AutonomousSystem* findAutonomousSystem(int asn);
  const AutonomousSystem* findAutonomousSystem(int asn) const;
  InternetExchange& getInternetExchange(int id);
  const InternetExchange& getInternetExchange(int id) const;
  const InternetExchange* findInternetExchange(int id) const;
  /// Exchange whose peering network is called `networkName` ("ix{id}").
  InternetExchange* findExchangeByNetwork(std::string_view networkName);

  std::vector<const AutonomousSystem*> autonomousSystems() const;
  std::vector<AutonomousSystem*> autonomousSystems();
  std::vector<const InternetExchange*> internetExchanges() const;
  std::vector<InternetExchange*> internetExchanges();

  /// Every node: AS nodes by (asn, name), then route servers by exchange id.
  std::vector<const Node*> nodes() const;
  /// Exchange networks by id, then AS networks by (asn, creation order).
  std::vector<const Network*> networks() const;
  const Node* findNodeByKey(std::string_view key) const;

  void configure(RenderContext& ctx) override;

 private:
  friend class AutonomousSystem;
  friend class InternetExchange;
  friend class Network;
  friend class Node;

  void checkPrefixFree(const Ipv4Prefix& prefix) const;
  void claimPort(int port);
  void checkMutable() const { Layer::checkMutable(); }

  std::map<int, std::unique_ptr<AutonomousSystem>> ases_;
  std::map<int, std::unique_ptr<InternetExchange>> exchanges_;
  std::vector<Ipv4Prefix> prefixes_;
  std::set<int> ports_;
};

bool isValidIdentifier(std::string_view name);

}  // namespace emu

#include "emu/base.h"

#include <algorithm>
#include <cctype>

#include "emu/error.h"

namespace emu {
namespace {

constexpr uint32_t kHostPoolStart = 71;

void checkAbsolute(const std::string& nodePath) {
  if (nodePath.empty() || nodePath.front() != '/') {
    throw Error(ErrorCode::kRelativePath, "node path must be absolute: '" + nodePath + "'");
  }
}

void checkIdentifier(std::string_view name, std::string_view what) {
  if (!isValidIdentifier(name)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " name must match [A-Za-z0-9_-]+: '" + std::string(name) + "'");
  }
}

}  // namespace

bool isValidIdentifier(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::string_view nodeRoleName(NodeRole role) {
  switch (role) {
    case NodeRole::kHost: return "host";
    case NodeRole::kRouter: return "router";
    case NodeRole::kRouteServer: return "routeServer";
    case NodeRole::kRealWorldRouter: return "realWorldRouter";
  }
  return "unknown";
}

std::string_view nodeRoleCode(NodeRole role) {
  switch (role) {
    case NodeRole::kHost: return "h";
    case NodeRole::kRouter: return "r";
    case NodeRole::kRouteServer: return "rs";
    case NodeRole::kRealWorldRouter: return "rw";
  }
  return "x";
}

// ---------------------------------------------------------------------------
// PrefixSource

PrefixSource PrefixSource::fromList(std::vector<Ipv4Prefix> prefixes) {
  PrefixSource source;
  source.prefixes_ = std::move(prefixes);
  return source;
}

PrefixSource PrefixSource::fromProvider(std::string name, Provider provider) {
  if (!provider) throw Error(ErrorCode::kInvalidArgument, "prefix provider must be callable");
  PrefixSource source;
  source.name_ = std::move(name);
  source.provider_ = std::move(provider);
  return source;
}

std::vector<Ipv4Prefix> PrefixSource::collect() const {
  return provider_ ? provider_() : prefixes_;
}

// ---------------------------------------------------------------------------
// Node

Node::Node(std::string name, int asn, NodeRole role, AutonomousSystem* owner, Base* base,
           std::shared_ptr<CompositionState> state)
    : name_(std::move(name)), asn_(asn), role_(role), owner_(owner), base_(base), state_(std::move(state)) {}

std::string Node::scope() const {
  return exchangeScoped() ? "ix" : std::to_string(asn_);
}

std::string Node::containerName() const {
  return "as" + std::to_string(asn_) + std::string(nodeRoleCode(role_)) + "-" + name_;
}

bool Node::isBgpRouter() const {
  if (!isRouter()) return false;
  return std::any_of(interfaces_.begin(), interfaces_.end(),
                     [](const NodeInterface& i) { return i.network->isExchange(); });
}

Network& Node::resolveNetwork(std::string_view networkName) const {
  if (owner_ != nullptr) {
    if (Network* local = owner_->findNetwork(networkName)) return *local;
  }
  if (InternetExchange* ix = base_->findExchangeByNetwork(networkName)) return ix->network();
  throw Error(ErrorCode::kUnknownNetwork,
              "node '" + name_ + "' cannot join unknown network '" + std::string(networkName) + "'");
}

void Node::attach(Network& network, std::optional<Ipv4Address> address) {
  emu::checkMutable(*state_);
  for (const auto& iface : interfaces_) {
    if (iface.network == &network) {
      throw Error(ErrorCode::kInvalidArgument,
                  "node '" + name_ + "' already joined network '" + network.name() + "'");
    }
  }
  Ipv4Address chosen;
  if (address) {
    const Ipv4Prefix prefix = network.prefix();
    bool inside = prefix.contains(*address);
    if (inside && prefix.length() < 31) {
      inside = *address != prefix.network() && *address != prefix.broadcast();
    }
    if (!inside) {
      throw Error(ErrorCode::kAddressOutOfPrefix,
                  address->toString() + " is not a usable address of " + prefix.toString());
    }
    chosen = *address;
  } else {
    chosen = network.allocate(role_, asn_);
  }
  network.claim(chosen, this);
  interfaces_.push_back({&network, chosen});
}

Node& Node::joinNetwork(std::string_view networkName, std::string_view address) {
  emu::checkMutable(*state_);
  Network& network = resolveNetwork(networkName);
  if (address == "auto" || address.empty()) {
    attach(network, std::nullopt);
  } else {
    attach(network, Ipv4Address::fromString(address));
  }
  return *this;
}

Node& Node::joinNetwork(std::string_view networkName, Ipv4Address address) {
  emu::checkMutable(*state_);
  attach(resolveNetwork(networkName), address);
  return *this;
}

std::optional<Ipv4Address> Node::addressOn(const Network& network) const {
  for (const auto& iface : interfaces_) {
    if (iface.network == &network) return iface.address;
  }
  return std::nullopt;
}

Node& Node::addSoftware(std::string package) {
  emu::checkMutable(*state_);
  if (package.empty()) throw Error(ErrorCode::kInvalidArgument, "empty package name");
  software_.insert(std::move(package));
  return *this;
}

Node& Node::importFile(std::filesystem::path hostPath, std::string nodePath) {
  emu::checkMutable(*state_);
  checkAbsolute(nodePath);
  files_.push_back({std::move(nodePath), std::nullopt, std::move(hostPath)});
  return *this;
}

Node& Node::setFile(std::string content, std::string nodePath) {
  emu::checkMutable(*state_);
  checkAbsolute(nodePath);
  files_.push_back({std::move(nodePath), std::move(content), std::nullopt});
  return *this;
}

Node& Node::addBuildCommand(std::string command) {
  emu::checkMutable(*state_);
  buildCommands_.push_back(std::move(command));
  return *this;
}

Node& Node::appendStartCommand(std::string command) {
  emu::checkMutable(*state_);
  startCommands_.push_back(std::move(command));
  return *this;
}

Node& Node::setDisplayName(std::string displayName) {
  emu::checkMutable(*state_);
  displayName_ = std::move(displayName);
  return *this;
}

Node& Node::setDescription(std::string description) {
  emu::checkMutable(*state_);
  description_ = std::move(description);
  return *this;
}

nlohmann::json Node::toJson() const {
  nlohmann::ordered_json out;
  out["name"] = name_;
  out["asn"] = asn_;
  out["role"] = nodeRoleName(role_);
  auto& ifaces = out["interfaces"] = nlohmann::ordered_json::array();
  for (const auto& iface : interfaces_) {
    ifaces.push_back({{"network", iface.network->qualifiedName()}, {"address", iface.address.toString()}});
  }
  out["software"] = software_;
  auto& files = out["files"] = nlohmann::ordered_json::array();
  for (const auto& file : files_) {
    nlohmann::ordered_json entry;
    entry["path"] = file.nodePath;
    if (file.content) entry["content"] = *file.content;
    if (file.hostPath) entry["hostPath"] = file.hostPath->string();
    files.push_back(std::move(entry));
  }
  out["buildCommands"] = buildCommands_;
  out["startCommands"] = startCommands_;
  out["displayName"] = displayName_;
  out["description"] = description_;
  if (role_ == NodeRole::kRealWorldRouter) {
    auto& announced = out["announced"] = nlohmann::ordered_json::array();
    for (const auto& prefix : announced_) announced.push_back(prefix.toString());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Network

Network::Network(std::string name, Ipv4Prefix prefix, bool exchange, int scopeId, Base* base,
                 std::shared_ptr<CompositionState> state)
    : name_(std::move(name)), prefix_(prefix), exchange_(exchange), scopeId_(scopeId), base_(base),
      state_(std::move(state)) {}

std::string Network::qualifiedName() const {
  return exchange_ ? "net_ix_" + name_ : "net_" + std::to_string(scopeId_) + "_" + name_;
}

Ipv4Address Network::allocateFromPool(bool ascending) {
  const uint64_t size = prefix_.size();
  if (size < 4) {
    throw Error(ErrorCode::kAddressOutOfPrefix, "network " + name_ + " too small for automatic addressing");
  }
  const uint32_t last = static_cast<uint32_t>(size - 2);
  if (ascending) {
    uint32_t start = last >= kHostPoolStart ? kHostPoolStart : 1;
    for (uint32_t offset = start; offset <= last; ++offset) {
      if (!used_.contains(prefix_.at(offset))) return prefix_.at(offset);
    }
  } else {
    for (uint32_t offset = last; offset >= 1; --offset) {
      if (!used_.contains(prefix_.at(offset))) return prefix_.at(offset);
    }
  }
  throw Error(ErrorCode::kAddressOutOfPrefix, "address pool of network " + name_ + " exhausted");
}

Ipv4Address Network::allocate(NodeRole role, int asn) {
  if (exchange_ && role != NodeRole::kRouteServer) {
    if (asn > 254 || static_cast<uint64_t>(asn) >= prefix_.size() - 1) {
      throw Error(ErrorCode::kExplicitAddressRequired,
                  "AS" + std::to_string(asn) + " needs an explicit address on " + name_);
    }
    return prefix_.at(static_cast<uint32_t>(asn));
  }
  return allocateFromPool(role == NodeRole::kHost);
}

void Network::claim(Ipv4Address address, const Node* node) {
  if (used_.contains(address)) {
    throw Error(ErrorCode::kAddressInUse, address.toString() + " already used on " + name_);
  }
  used_.emplace(address, node);
}

Network& Network::enableRemoteAccess(RemoteAccessSpec spec) {
  emu::checkMutable(*state_);
  if (exchange_) {
    throw Error(ErrorCode::kIxNetworkNotAllowed, "remote access cannot be enabled on " + name_);
  }
  if (remoteAccess_) {
    throw Error(ErrorCode::kInvalidArgument, "remote access already enabled on " + name_);
  }
  if (spec.exposedPort < 1 || spec.exposedPort > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "port out of range: " + std::to_string(spec.exposedPort));
  }
  base_->claimPort(spec.exposedPort);
  remoteAccess_ = std::move(spec);
  return *this;
}

std::vector<std::pair<const Node*, Ipv4Address>> Network::attachments() const {
  std::vector<std::pair<const Node*, Ipv4Address>> out;
  for (const auto& [address, node] : used_) {
    if (node != nullptr) out.emplace_back(node, address);
  }
  return out;
}

nlohmann::json Network::toJson() const {
  nlohmann::ordered_json out;
  out["name"] = name_;
  out["qualifiedName"] = qualifiedName();
  out["prefix"] = prefix_.toString();
  out["scope"] = scope();
  if (remoteAccess_) {
    out["remoteAccess"] = {{"service", remoteAccess_->serviceKind},
                           {"port", remoteAccess_->exposedPort},
                           {"address", remoteAccessAddress_ ? remoteAccessAddress_->toString() : ""}};
  }
  return out;
}

// ---------------------------------------------------------------------------
// InternetExchange

InternetExchange::InternetExchange(int id, Ipv4Prefix prefix, Base* base, std::shared_ptr<CompositionState> state)
    : id_(id), base_(base), state_(state) {
  network_.reset(new Network("ix" + std::to_string(id), prefix, true, id, base, std::move(state)));
}

Node& InternetExchange::ensureRouteServer() {
  if (!routeServer_) {
    emu::checkMutable(*state_);
    routeServer_.reset(new Node("ix" + std::to_string(id_), id_, NodeRole::kRouteServer, nullptr, base_, state_));
    routeServer_->attach(*network_, std::nullopt);
  }
  return *routeServer_;
}

nlohmann::json InternetExchange::toJson() const {
  return {{"id", id_}, {"network", network_->qualifiedName()}, {"prefix", network_->prefix().toString()}};
}

// ---------------------------------------------------------------------------
// AutonomousSystem

AutonomousSystem::AutonomousSystem(int asn, Base* base, std::shared_ptr<CompositionState> state)
    : asn_(asn), base_(base), state_(std::move(state)) {}

Network& AutonomousSystem::createNetwork(std::string name, std::optional<Ipv4Prefix> prefix) {
  emu::checkMutable(*state_);
  checkIdentifier(name, "network");
  if (findNetwork(name) != nullptr) {
    throw Error(ErrorCode::kDuplicateName, "AS" + std::to_string(asn_) + " already has network '" + name + "'");
  }
  if (!prefix) {
    const size_t k = networks_.size();
    if (asn_ > 255 || k > 255) {
      throw Error(ErrorCode::kExplicitPrefixRequired,
                  "network '" + name + "' of AS" + std::to_string(asn_) + " needs an explicit prefix");
    }
    prefix = Ipv4Prefix(Ipv4Address((10u << 24) | (static_cast<uint32_t>(asn_) << 16) |
                                    (static_cast<uint32_t>(k) << 8)),
                        24);
  }
  base_->checkPrefixFree(*prefix);
  networks_.push_back(std::unique_ptr<Network>(new Network(std::move(name), *prefix, false, asn_, base_, state_)));
  base_->prefixes_.push_back(*prefix);
  return *networks_.back();
}

Node& AutonomousSystem::createNode(std::string name, NodeRole role) {
  emu::checkMutable(*state_);
  checkIdentifier(name, "node");
  if (nodes_.contains(name)) {
    throw Error(ErrorCode::kDuplicateName, "AS" + std::to_string(asn_) + " already has node '" + name + "'");
  }
  auto node = std::unique_ptr<Node>(new Node(name, asn_, role, this, base_, state_));
  return *nodes_.emplace(std::move(name), std::move(node)).first->second;
}

Node& AutonomousSystem::createRouter(std::string name) { return createNode(std::move(name), NodeRole::kRouter); }

Node& AutonomousSystem::createHost(std::string name) { return createNode(std::move(name), NodeRole::kHost); }

Node& AutonomousSystem::createRealWorldRouter(std::string name, PrefixSource source) {
  emu::checkMutable(*state_);
  if (source.isStatic() && source.collect().empty()) {
    throw Error(ErrorCode::kEmptyPrefixSource, "real-world router '" + name + "' has no prefixes");
  }
  Node& node = createNode(std::move(name), NodeRole::kRealWorldRouter);
  node.prefixSource_ = std::move(source);
  return node;
}

Network* AutonomousSystem::findNetwork(std::string_view name) {
  for (auto& network : networks_) {
    if (network->name() == name) return network.get();
  }
  return nullptr;
}

const Network* AutonomousSystem::findNetwork(std::string_view name) const {
  return const_cast<AutonomousSystem*>(this)->findNetwork(name);
}

Network& AutonomousSystem::getNetwork(std::string_view name) {
  if (Network* network = findNetwork(name)) return *network;
  throw Error(ErrorCode::kUnknownNetwork, "AS" + std::to_string(asn_) + " has no network '" + std::string(name) + "'");
}

const Network& AutonomousSystem::getNetwork(std::string_view name) const {
  return const_cast<AutonomousSystem*>(this)->getNetwork(name);
}

const Node* AutonomousSystem::findNode(std::string_view name) const {
  auto it = nodes_.find(name);
  return it == nodes_.end() ? nullptr : it->second.get();
}

Node& AutonomousSystem::getNode(std::string_view name) {
  auto it = nodes_.find(name);
  if (it == nodes_.end()) {
    throw Error(ErrorCode::kUnknownNode, "AS" + std::to_string(asn_) + " has no node '" + std::string(name) + "'");
  }
  return *it->second;
}

Node& AutonomousSystem::getHost(std::string_view name) {
  Node& node = getNode(name);
  if (!node.isHost()) throw Error(ErrorCode::kUnknownNode, "'" + std::string(name) + "' is not a host");
  return node;
}

Node& AutonomousSystem::getRouter(std::string_view name) {
  Node& node = getNode(name);
  if (!node.isRouter()) throw Error(ErrorCode::kUnknownNode, "'" + std::string(name) + "' is not a router");
  return node;
}

std::vector<const Network*> AutonomousSystem::networks() const {
  std::vector<const Network*> out;
  for (const auto& network : networks_) out.push_back(network.get());
  return out;
}

std::vector<Network*> AutonomousSystem::networks() {
  std::vector<Network*> out;
  for (auto& network : networks_) out.push_back(network.get());
  return out;
}

std::vector<const Node*> AutonomousSystem::nodes() const {
  std::vector<const Node*> out;
  for (const auto& [name, node] : nodes_) out.push_back(node.get());
  return out;
}

std::vector<Node*> AutonomousSystem::nodes() {
  std::vector<Node*> out;
  for (auto& [name, node] : nodes_) out.push_back(node.get());
  return out;
}

std::vector<const Node*> AutonomousSystem::routers() const {
  std::vector<const Node*> out;
  for (const auto& [name, node] : nodes_) {
    if (node->isRouter()) out.push_back(node.get());
  }
  return out;
}

std::vector<const Node*> AutonomousSystem::hosts() const {
  std::vector<const Node*> out;
  for (const auto& [name, node] : nodes_) {
    if (node->isHost()) out.push_back(node.get());
  }
  return out;
}

nlohmann::json AutonomousSystem::toJson() const {
  nlohmann::ordered_json out;
  out["asn"] = asn_;
  auto& networks = out["networks"] = nlohmann::ordered_json::array();
  for (const auto& network : networks_) networks.push_back(network->name());
  auto& nodes = out["nodes"] = nlohmann::ordered_json::array();
  for (const auto& [name, node] : nodes_) nodes.push_back(name);
  return out;
}

// ---------------------------------------------------------------------------
// Base

Base::Base(std::string name) : Layer(std::move(name), LayerKind::kBase) {}

InternetExchange& Base::createInternetExchange(int id, std::optional<Ipv4Prefix> prefix) {
  checkMutable();
  if (id < 2 || id > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "exchange id out of range: " + std::to_string(id));
  }
  if (exchanges_.contains(id)) throw Error(ErrorCode::kDuplicateId, "exchange " + std::to_string(id));
  if (!prefix) {
    if (id > 255) {
      throw Error(ErrorCode::kExplicitPrefixRequired, "exchange " + std::to_string(id) + " needs an explicit prefix");
    }
    prefix = Ipv4Prefix(Ipv4Address((10u << 24) | (static_cast<uint32_t>(id) << 16)), 24);
  }
  checkPrefixFree(*prefix);
  auto ix = std::unique_ptr<InternetExchange>(new InternetExchange(id, *prefix, this, state()));
  prefixes_.push_back(*prefix);
  return *exchanges_.emplace(id, std::move(ix)).first->second;
}

AutonomousSystem& Base::createAutonomousSystem(int asn) {
  checkMutable();
  if (asn < 2 || asn > 65535) throw Error(ErrorCode::kInvalidArgument, "ASN out of range: " + std::to_string(asn));
  if (ases_.contains(asn)) throw Error(ErrorCode::kDuplicateId, "AS" + std::to_string(asn));
  auto as = std::unique_ptr<AutonomousSystem>(new AutonomousSystem(asn, this, state()));
  return *ases_.emplace(asn, std::move(as)).first->second;
}

AutonomousSystem* Base::findAutonomousSystem(int asn) {
  auto it = ases_.find(asn);
  return it == ases_.end() ? nullptr : it->second.get();
}

const AutonomousSystem* Base::findAutonomousSystem(int asn) const {
  return const_cast<Base*>(this)->findAutonomousSystem(asn);
}

AutonomousSystem& Base::getAutonomousSystem(int asn) {
  if (AutonomousSystem* as = findAutonomousSystem(asn)) return *as;
  throw Error(ErrorCode::kUnknownAs, "AS" + std::to_string(asn));
}

const AutonomousSystem& Base::getAutonomousSystem(int asn) const {
  return const_cast<Base*>(this)->getAutonomousSystem(asn);
}

const InternetExchange* Base::findInternetExchange(int id) const {
  auto it = exchanges_.find(id);
  return it == exchanges_.end() ? nullptr : it->second.get();
}

InternetExchange& Base::getInternetExchange(int id) {
  auto it = exchanges_.find(id);
  if (it == exchanges_.end()) throw Error(ErrorCode::kUnknownExchange, "exchange " + std::to_string(id));
  return *it->second;
}

const InternetExchange& Base::getInternetExchange(int id) const {
  return const_cast<Base*>(this)->getInternetExchange(id);
}

InternetExchange* Base::findExchangeByNetwork(std::string_view networkName) {
  if (networkName.size() < 3 || networkName.substr(0, 2) != "ix") return nullptr;
  for (auto& [id, ix] : exchanges_) {
    if (ix->network().name() == networkName) return ix.get();
  }
  return nullptr;
}

std::vector<const AutonomousSystem*> Base::autonomousSystems() const {
  std::vector<const AutonomousSystem*> out;
  for (const auto& [asn, as] : ases_) out.push_back(as.get());
  return out;
}

std::vector<AutonomousSystem*> Base::autonomousSystems() {
  std::vector<AutonomousSystem*> out;
  for (auto& [asn, as] : ases_) out.push_back(as.get());
  return out;
}

std::vector<const InternetExchange*> Base::internetExchanges() const {
  std::vector<const InternetExchange*> out;
  for (const auto& [id, ix] : exchanges_) out.push_back(ix.get());
  return out;
}

std::vector<InternetExchange*> Base::internetExchanges() {
  std::vector<InternetExchange*> out;
  for (auto& [id, ix] : exchanges_) out.push_back(ix.get());
  return out;
}

std::vector<const Node*> Base::nodes() const {
  std::vector<const Node*> out;
  for (const auto& [asn, as] : ases_) {
    for (const Node* node : as->nodes()) out.push_back(node);
  }
  for (const auto& [id, ix] : exchanges_) {
    if (ix->routeServer() != nullptr) out.push_back(ix->routeServer());
  }
  return out;
}

std::vector<const Network*> Base::networks() const {
  std::vector<const Network*> out;
  for (const auto& [id, ix] : exchanges_) out.push_back(&ix->network());
  for (const auto& [asn, as] : ases_) {
    for (const Network* network : as->networks()) out.push_back(network);
  }
  return out;
}

const Node* Base::findNodeByKey(std::string_view key) const {
  size_t slash = key.find('/');
  if (slash == std::string_view::npos) return nullptr;
  std::string_view scope = key.substr(0, slash);
  std::string_view name = key.substr(slash + 1);
  if (scope == "ix") {
    for (const auto& [id, ix] : exchanges_) {
      if (ix->routeServer() != nullptr && ix->routeServer()->name() == name) return ix->routeServer();
    }
    return nullptr;
  }
  int asn = 0;
  for (char c : scope) {
    if (c < '0' || c > '9') return nullptr;
    asn = asn * 10 + (c - '0');
    if (asn > 65535) return nullptr;
  }
  const AutonomousSystem* as = findAutonomousSystem(asn);
  return as == nullptr ? nullptr : as->findNode(name);
}

void Base::checkPrefixFree(const Ipv4Prefix& prefix) const {
  if (prefix.overlaps(kLoopbackRange)) {
    throw Error(ErrorCode::kPrefixOverlap, prefix.toString() + " overlaps the loopback range " +
                                               kLoopbackRange.toString());
  }
  for (const auto& existing : prefixes_) {
    if (existing.overlaps(prefix)) {
      throw Error(ErrorCode::kPrefixOverlap, prefix.toString() + " overlaps " + existing.toString());
    }
  }
}

void Base::claimPort(int port) {
  if (!ports_.insert(port).second) throw Error(ErrorCode::kPortInUse, "port " + std::to_string(port));
}

void Base::configure(RenderContext& ctx) {
  Registry& registry = ctx.registry();
  for (auto& [id, ix] : exchanges_) {
    registry.add({"ix", "ix", std::to_string(id)}, ix.get());
    registry.add({"ix", "net", ix->network().name()}, &ix->network());
    if (const Node* rs = ix->routeServer()) registry.add({"ix", "node", rs->name()}, rs);
  }
  for (auto& [asn, as] : ases_) {
    const std::string scope = std::to_string(asn);
    registry.add({"global", "as", scope}, as.get());
    for (Network* network : as->networks()) {
      registry.add({scope, "net", network->name()}, network);
      if (network->remoteAccess_ && !network->remoteAccessAddress_) {
        Ipv4Address address = network->allocateFromPool(true);
        network->claim(address, nullptr);
        network->remoteAccessAddress_ = address;
      }
    }
    for (Node* node : as->nodes()) {
      if (node->interfaces().empty()) {
        throw Error(ErrorCode::kInvalidArgument, "node " + node->key() + " has no interfaces");
      }
      if (node->prefixSource_) {
        node->announced_ = node->prefixSource_->collect();
        if (node->announced_.empty()) {
          throw Error(ErrorCode::kEmptyPrefixSource,
                      "prefix source '" + node->prefixSource_->name() + "' of " + node->key() + " returned nothing");
        }
      }
      registry.add({scope, "node", node->name()}, node);
    }
  }
}

}  // namespace emu

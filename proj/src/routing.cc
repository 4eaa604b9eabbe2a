#include "emu/routing.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "emu/emulator.h"
#include "emu/error.h"

namespace emu {

std::string_view relationshipName(PeerRelationship relationship) {
  switch (relationship) {
    case PeerRelationship::kProvider: return "Provider";
    case PeerRelationship::kPeer: return "Peer";
    case PeerRelationship::kUnfiltered: return "Unfiltered";
  }
  return "?";
}

std::string_view neighborRoleName(NeighborRole role) {
  switch (role) {
    case NeighborRole::kCustomer: return "customer";
    case NeighborRole::kPeer: return "peer";
    case NeighborRole::kProvider: return "provider";
    case NeighborRole::kUnfiltered: return "unfiltered";
    case NeighborRole::kRouteServer: return "route-server";
    case NeighborRole::kRsClient: return "rs-client";
  }
  return "?";
}

std::string_view routeClassName(RouteClass routeClass) {
  switch (routeClass) {
    case RouteClass::kOwn: return "own";
    case RouteClass::kCustomer: return "customer";
    case RouteClass::kPeer: return "peer";
    case RouteClass::kProvider: return "provider";
    case RouteClass::kUnfiltered: return "unfiltered";
  }
  return "?";
}

int routePreference(RouteClass routeClass) {
  switch (routeClass) {
    case RouteClass::kOwn: return 40;
    case RouteClass::kCustomer: return 30;
    case RouteClass::kPeer: return 20;
    case RouteClass::kProvider:
    case RouteClass::kUnfiltered: return 10;
  }
  return 0;
}

RouteClass importClass(NeighborRole role) {
  switch (role) {
    case NeighborRole::kCustomer: return RouteClass::kCustomer;
    case NeighborRole::kProvider: return RouteClass::kProvider;
    case NeighborRole::kUnfiltered: return RouteClass::kUnfiltered;
    case NeighborRole::kPeer:
    case NeighborRole::kRouteServer:
    case NeighborRole::kRsClient: return RouteClass::kPeer;
  }
  return RouteClass::kPeer;
}

bool exportAllowed(NeighborRole role, RouteClass routeClass) {
  switch (role) {
    case NeighborRole::kCustomer:
    case NeighborRole::kUnfiltered:
    case NeighborRole::kRsClient: return true;
    case NeighborRole::kPeer:
    case NeighborRole::kProvider:
    case NeighborRole::kRouteServer:
      return routeClass == RouteClass::kOwn || routeClass == RouteClass::kCustomer;
  }
  return false;
}

std::vector<Ipv4Prefix> originatedPrefixes(const AutonomousSystem& as) {
  std::vector<Ipv4Prefix> out;
  for (const Network* network : as.networks()) {
    auto attached = network->attachments();
    if (std::any_of(attached.begin(), attached.end(),
                    [](const auto& entry) { return entry.first != nullptr && entry.first->isRouter(); })) {
      out.push_back(network->prefix());
    }
  }
  for (const Node* router : as.routers()) {
    for (const auto& prefix : router->announcedPrefixes()) {
      if (std::find(out.begin(), out.end(), prefix) == out.end()) out.push_back(prefix);
    }
  }
  return out;
}

IbgpMesh buildIbgpMesh(const AutonomousSystem& as) {
  IbgpMesh mesh;
  mesh.asn = as.asn();
  auto routers = as.routers();
  for (size_t i = 0; i < routers.size(); ++i) {
    for (size_t j = i + 1; j < routers.size(); ++j) mesh.sessionPairs.emplace_back(routers[i], routers[j]);
  }
  return mesh;
}

std::vector<std::string> interfaceNames(const Node& node) {
  static const std::set<std::string, std::less<>> reserved = {"lo", "dummy0", "ext0"};
  std::vector<std::string> names;
  std::map<std::string, int> counts;
  for (const auto& iface : node.interfaces()) ++counts[iface.network->name()];
  for (size_t i = 0; i < node.interfaces().size(); ++i) {
    const std::string& name = node.interfaces()[i].network->name();
    bool usable = name.size() <= 15 && counts[name] == 1 && !reserved.contains(name) && name.rfind("if", 0) != 0;
    names.push_back(usable ? name : "if" + std::to_string(i));
  }
  return names;
}

// ---------------------------------------------------------------------------
// Routing

void Routing::configure(RenderContext& ctx) {
  RoutingState& routing = ctx.routing();
  routing.routingEnabled = true;
  uint32_t index = 0;
  for (const AutonomousSystem* as : std::as_const(ctx.base()).autonomousSystems()) {
    for (const Node* router : as->routers()) {
      if (++index >= kLoopbackRange.size() - 1) {
        throw Error(ErrorCode::kInvalidArgument, "too many routers for the loopback range");
      }
      routing.loopbacks.emplace(router->key(), kLoopbackRange.at(index));
    }
    routing.ibgp[as->asn()] = buildIbgpMesh(*as);
  }
}

void Routing::render(RenderContext& ctx) {
  for (AutonomousSystem* as : ctx.base().autonomousSystems()) {
    for (Node* node : as->nodes()) {
      if (node->isRouter()) node->addSoftware("bird2");
    }
  }
}

// ---------------------------------------------------------------------------
// Ebgp

namespace {

bool samePair(const PeeringSession& s, int ix, int a, int b) {
  return !s.viaRouteServer && s.ix == ix &&
         ((s.leftAsn == a && s.rightAsn == b) || (s.leftAsn == b && s.rightAsn == a));
}

NeighborRole roleOfRight(PeerRelationship relationship) {
  switch (relationship) {
    case PeerRelationship::kProvider: return NeighborRole::kCustomer;
    case PeerRelationship::kPeer: return NeighborRole::kPeer;
    case PeerRelationship::kUnfiltered: return NeighborRole::kUnfiltered;
  }
  return NeighborRole::kPeer;
}

NeighborRole roleOfLeft(PeerRelationship relationship) {
  return relationship == PeerRelationship::kProvider ? NeighborRole::kProvider : roleOfRight(relationship);
}

}  // namespace

std::vector<PeeringSession> Ebgp::addPrivatePeerings(int ix, const std::vector<int>& leftAsns,
                                                     const std::vector<int>& rightAsns,
                                                     PeerRelationship relationship) {
  checkMutable();
  std::vector<PeeringSession> added;
  for (int left : leftAsns) {
    for (int right : rightAsns) {
      if (left == right) {
        throw Error(ErrorCode::kInvalidArgument, "AS" + std::to_string(left) + " cannot peer with itself");
      }
      auto dup = [&](const PeeringSession& s) { return samePair(s, ix, left, right); };
      if (std::any_of(sessions_.begin(), sessions_.end(), dup) || std::any_of(added.begin(), added.end(), dup)) {
        throw Error(ErrorCode::kDuplicateSession, "AS" + std::to_string(left) + " and AS" + std::to_string(right) +
                                                      " already peer at ix" + std::to_string(ix));
      }
      added.push_back({ix, left, right, relationship, false});
    }
  }
  sessions_.insert(sessions_.end(), added.begin(), added.end());
  return added;
}

std::vector<PeeringSession> Ebgp::addPrivatePeering(int ix, int leftAsn, int rightAsn, PeerRelationship relationship) {
  return addPrivatePeerings(ix, {leftAsn}, {rightAsn}, relationship);
}

std::vector<PeeringSession> Ebgp::addRsPeers(int ix, const std::vector<int>& asns) {
  checkMutable();
  std::vector<PeeringSession> added;
  for (int asn : asns) {
    auto dup = [&](const PeeringSession& s) { return s.viaRouteServer && s.ix == ix && s.leftAsn == asn; };
    if (std::any_of(sessions_.begin(), sessions_.end(), dup) || std::any_of(added.begin(), added.end(), dup)) {
      throw Error(ErrorCode::kDuplicateSession,
                  "AS" + std::to_string(asn) + " already peers with the route server at ix" + std::to_string(ix));
    }
    added.push_back({ix, asn, ix, PeerRelationship::kPeer, true});
  }
  sessions_.insert(sessions_.end(), added.begin(), added.end());
  return added;
}

const Node& exchangeRouter(const Base& base, int asn, int ix) {
  const InternetExchange& exchange = base.getInternetExchange(ix);
  const AutonomousSystem* as = base.findAutonomousSystem(asn);
  if (as != nullptr) {
    for (const Node* router : as->routers()) {
      if (router->addressOn(exchange.network())) return *router;
    }
  }
  throw Error(ErrorCode::kNotAtExchange, "AS" + std::to_string(asn) + " has no router on ix" + std::to_string(ix));
}

void Ebgp::configure(RenderContext& ctx) {
  RoutingState& routing = ctx.routing();
  routing.ebgpEnabled = true;
  Base& base = ctx.base();
  std::map<int, std::vector<int>> participants;

  for (const PeeringSession& session : sessions_) {
    InternetExchange& exchange = base.getInternetExchange(session.ix);
    const Network& lan = exchange.network();
    const Node& left = exchangeRouter(base, session.leftAsn, session.ix);
    const Ipv4Address leftAddress = *left.addressOn(lan);
    if (session.viaRouteServer) {
      Node& rs = exchange.ensureRouteServer();
      RegistryKey key{"ix", "node", rs.name()};
      if (!ctx.registry().contains(key)) ctx.registry().add(key, &rs);
      const Ipv4Address rsAddress = *rs.addressOn(lan);
      routing.ebgp[left.key()].push_back(
          {&rs, session.ix, session.ix, leftAddress, rsAddress, NeighborRole::kRouteServer});
      routing.ebgp[rs.key()].push_back(
          {&left, session.leftAsn, session.ix, rsAddress, leftAddress, NeighborRole::kRsClient});
      participants[session.ix].push_back(session.leftAsn);
      continue;
    }
    const Node& right = exchangeRouter(base, session.rightAsn, session.ix);
    const Ipv4Address rightAddress = *right.addressOn(lan);
    routing.ebgp[left.key()].push_back(
        {&right, session.rightAsn, session.ix, leftAddress, rightAddress, roleOfRight(session.relationship)});
    routing.ebgp[right.key()].push_back(
        {&left, session.leftAsn, session.ix, rightAddress, leftAddress, roleOfLeft(session.relationship)});
    routing.adjacencies.push_back({session.ix, session.leftAsn, session.rightAsn, session.relationship, false});
  }

  for (const auto& [ix, asns] : participants) {
    for (size_t i = 0; i < asns.size(); ++i) {
      for (size_t j = i + 1; j < asns.size(); ++j) {
        routing.adjacencies.push_back({ix, asns[i], asns[j], PeerRelationship::kPeer, true});
      }
    }
  }
  for (auto& [key, neighbors] : routing.ebgp) {
    std::stable_sort(neighbors.begin(), neighbors.end(), [](const BgpNeighbor& a, const BgpNeighbor& b) {
      return std::tie(a.ix, a.peerAsn) < std::tie(b.ix, b.peerAsn);
    });
  }
}

void Ebgp::render(RenderContext& ctx) {
  const auto& sessions = ctx.routing().ebgp;
  for (AutonomousSystem* as : ctx.base().autonomousSystems()) {
    for (Node* node : as->nodes()) {
      if (sessions.contains(node->key())) node->addSoftware("bird2");
    }
  }
  for (InternetExchange* ix : ctx.base().internetExchanges()) {
    if (ix->routeServer() != nullptr) ix->ensureRouteServer().addSoftware("bird2");
  }
}

// ---------------------------------------------------------------------------
// Configuration emission

namespace {

std::string symbol(std::string_view text) {
  std::string out;
  for (char c : text) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

std::string_view roleTag(NeighborRole role) {
  switch (role) {
    case NeighborRole::kCustomer: return "c";
    case NeighborRole::kPeer: return "p";
    case NeighborRole::kProvider: return "u";
    case NeighborRole::kUnfiltered: return "x";
    case NeighborRole::kRouteServer: return "rs";
    case NeighborRole::kRsClient: return "rsc";
  }
  return "n";
}

std::string communitySet(const std::vector<RouteClass>& classes) {
  std::string out = "[";
  for (size_t i = 0; i < classes.size(); ++i) {
    if (i > 0) out += ", ";
    out += "(LOCAL_AS, 1, " + std::to_string(static_cast<int>(classes[i])) + ")";
  }
  return out + "]";
}

std::vector<RouteClass> exportable(NeighborRole role) {
  std::vector<RouteClass> out;
  for (RouteClass c : {RouteClass::kOwn, RouteClass::kCustomer, RouteClass::kPeer, RouteClass::kProvider,
                       RouteClass::kUnfiltered}) {
    if (exportAllowed(role, c)) out.push_back(c);
  }
  return out;
}

Ipv4Address routerId(const RoutingState& routing, const Node& node) {
  auto it = routing.loopbacks.find(node.key());
  return it != routing.loopbacks.end() ? it->second : node.interfaces().front().address;
}

void emitRouteServer(std::ostringstream& out, const RoutingState& routing, const Node& node) {
  out << "router id " << routerId(routing, node).toString() << ";\n\n";
  out << "protocol device {\n}\n";
  auto it = routing.ebgp.find(node.key());
  if (it == routing.ebgp.end()) return;
  for (const BgpNeighbor& n : it->second) {
    out << "\nprotocol bgp " << roleTag(n.role) << "_as" << n.peerAsn << " {\n";
    out << "    local " << n.localAddress.toString() << " as " << node.asn() << ";\n";
    out << "    neighbor " << n.peerAddress.toString() << " as " << n.peerAsn << ";\n";
    out << "    rs client;\n";
    out << "    ipv4 {\n        import all;\n        export all;\n    };\n}\n";
  }
}

}  // namespace

std::optional<std::string> emitRouterConfig(const RenderedEmulation& rendered, const Node& node) {
  const RoutingState& routing = rendered.routing();
  if (node.isHost()) return std::nullopt;
  if (!routing.routingEnabled && !routing.ebgpEnabled) return std::nullopt;

  std::ostringstream out;
  out << "# " << node.containerName() << "\n";
  if (node.role() == NodeRole::kRouteServer) {
    emitRouteServer(out, routing, node);
    return out.str();
  }

  const Base& base = rendered.base();
  const AutonomousSystem& as = base.getAutonomousSystem(node.asn());
  const auto names = interfaceNames(node);
  const auto own = originatedPrefixes(as);
  auto loopback = routing.loopbacks.find(node.key());
  const bool hasLoopback = loopback != routing.loopbacks.end();

  out << "router id " << routerId(routing, node).toString() << ";\n";
  out << "define LOCAL_AS = " << as.asn() << ";\n";
  if (!own.empty()) {
    out << "define OWN_NETS = [ ";
    for (size_t i = 0; i < own.size(); ++i) out << (i ? ", " : "") << own[i].toString();
    out << " ];\n";
  }
  out << "\nprotocol device {\n}\n";
  out << "\nprotocol kernel {\n    merge paths on;\n    ipv4 {\n        import none;\n"
      << "        export where source = RTS_OSPF || source = RTS_BGP;\n    };\n}\n";

  std::vector<std::string> statics;
  for (size_t i = 0; i < node.interfaces().size(); ++i) {
    const Network& network = *node.interfaces()[i].network;
    if (network.isExchange()) continue;
    if (std::find(own.begin(), own.end(), network.prefix()) == own.end()) continue;
    statics.push_back("route " + network.prefix().toString() + " via \"" + names[i] + "\"");
  }
  for (const auto& prefix : node.announcedPrefixes()) statics.push_back("route " + prefix.toString() + " via \"ext0\"");
  if (!statics.empty()) {
    out << "\nprotocol static origin {\n    ipv4 {\n        import all;\n        export none;\n    };\n";
    for (const auto& route : statics) {
      out << "    " << route << " {\n        bgp_large_community.add((LOCAL_AS, 1, 0));\n    };\n";
    }
    out << "}\n";
  }

  if (routing.routingEnabled) {
    out << "\nprotocol ospf v2 ospf1 {\n    ipv4 {\n";
    if (own.empty()) {
      out << "        import all;\n";
    } else {
      out << "        import filter {\n            if net ~ OWN_NETS then bgp_large_community.add((LOCAL_AS, 1, 0));\n"
          << "            accept;\n        };\n";
    }
    out << "        export none;\n    };\n    area 0 {\n";
    if (hasLoopback) out << "        interface \"dummy0\" {\n            stub;\n        };\n";
    for (size_t i = 0; i < node.interfaces().size(); ++i) {
      out << "        interface \"" << names[i] << "\" {\n";
      if (node.interfaces()[i].network->isExchange()) {
        out << "            stub;\n";
      } else {
        out << "            hello 1;\n            dead count 3;\n";
      }
      out << "        };\n";
    }
    out << "    };\n}\n";

    auto mesh = routing.ibgp.find(as.asn());
    if (mesh != routing.ibgp.end() && hasLoopback) {
      for (const auto& [a, b] : mesh->second.sessionPairs) {
        const Node* peer = a == &node ? b : (b == &node ? a : nullptr);
        if (peer == nullptr) continue;
        out << "\nprotocol bgp ibgp_" << symbol(peer->name()) << " {\n";
        out << "    local " << loopback->second.toString() << " as LOCAL_AS;\n";
        out << "    neighbor " << routing.loopbacks.at(peer->key()).toString() << " as LOCAL_AS;\n";
        out << "    ipv4 {\n        import all;\n"
            << "        export where source = RTS_BGP || source = RTS_STATIC;\n"
            << "        next hop self;\n        igp table master4;\n    };\n}\n";
      }
    }
  }

  auto sessions = routing.ebgp.find(node.key());
  if (sessions != routing.ebgp.end()) {
    for (const BgpNeighbor& n : sessions->second) {
      const RouteClass cls = importClass(n.role);
      const auto allowed = exportable(n.role);
      out << "\nprotocol bgp " << roleTag(n.role) << "_as" << n.peerAsn << "_ix" << n.ix << " {\n";
      out << "    description \"" << neighborRoleName(n.role) << " AS" << n.peerAsn << " at ix" << n.ix << "\";\n";
      out << "    local " << n.localAddress.toString() << " as LOCAL_AS;\n";
      out << "    neighbor " << n.peerAddress.toString() << " as " << n.peerAsn << ";\n";
      out << "    ipv4 {\n        import filter {\n";
      out << "            bgp_large_community.add((LOCAL_AS, 1, " << static_cast<int>(cls) << "));\n";
      out << "            bgp_local_pref = " << routePreference(cls) << ";\n";
      out << "            accept;\n        };\n";
      out << "        export where " << "bgp_large_community ~ " << communitySet(allowed) << ";\n";
      out << "        next hop self;\n    };\n}\n";
    }
  }
  return out.str();
}

std::vector<std::string> routingStartCommands(const RenderedEmulation& rendered, const Node& node) {
  const RoutingState& routing = rendered.routing();
  std::vector<std::string> out;
  if (node.isHost()) {
    if (!routing.routingEnabled) return out;
    for (const auto& iface : node.interfaces()) {
      if (iface.network->isExchange()) continue;
      for (const auto& [peer, address] : iface.network->attachments()) {
        if (peer != nullptr && peer->isRouter()) {
          out.push_back("ip route replace default via " + address.toString());
          return out;
        }
      }
    }
    return out;
  }
  auto loopback = routing.loopbacks.find(node.key());
  if (loopback != routing.loopbacks.end()) {
    out.push_back("ip link add dummy0 type dummy");
    out.push_back("ip addr add " + loopback->second.toString() + "/32 dev dummy0");
    out.push_back("ip link set dummy0 up");
  }
  if (emitRouterConfig(rendered, node)) {
    out.push_back("mkdir -p /run/bird");
    out.push_back(std::string("bird -c ") + kBirdConfigPath);
  }
  return out;
}

}  // namespace emu

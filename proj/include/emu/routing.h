#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emu/base.h"
#include "emu/layer.h"
#include "emu/routing_state.h"

namespace emu {

class RenderedEmulation;

/// Large-community data2 values: where a route was learned.
enum class RouteClass { kOwn = 0, kCustomer = 1, kPeer = 2, kProvider = 3, kUnfiltered = 4 };

std::string_view routeClassName(RouteClass routeClass);
/// BGP local preference attached on import. Own routes rank above all learned ones.
int routePreference(RouteClass routeClass);
/// Class a route gets when imported from a neighbor with this role.
RouteClass importClass(NeighborRole role);
/// Whether a route of `routeClass` may be exported to a neighbor with `role`.
bool exportAllowed(NeighborRole role, RouteClass routeClass);

/// Prefixes an AS originates: internal networks with a router attached, then
/// the prefixes of its real-world routers.
std::vector<Ipv4Prefix> originatedPrefixes(const AutonomousSystem& as);

/// Full mesh over every router (regular and real-world) of the AS.
IbgpMesh buildIbgpMesh(const AutonomousSystem& as);

/// Intra-AS routing: loopbacks, OSPF on internal networks, full-mesh IBGP.
class Routing : public Layer {
 public:
  explicit Routing(std::string name = "Routing") : Layer(std::move(name), LayerKind::kRouting) {}

  std::string typeName() const override { return "Routing"; }

  void configure(RenderContext& ctx) override;
  void render(RenderContext& ctx) override;
};

struct PeeringSession {
  int ix;
  int leftAsn;
  /// Route-server sessions carry the exchange id here.
  int rightAsn;
  PeerRelationship relationship;
  bool viaRouteServer;
};

/// Inter-AS sessions: private peerings and route-server participation.
class Ebgp : public Layer {
 public:
  explicit Ebgp(std::string name = "Ebgp") : Layer(std::move(name), LayerKind::kEbgp) {}

  std::string typeName() const override { return "Ebgp"; }

  /// One session per (left, right) pair. For kProvider the left ASes are the
  /// providers. Throws DuplicateSession if a pair already peers on `ix`.
  std::vector<PeeringSession> addPrivatePeerings(int ix, const std::vector<int>& leftAsns,
                                                 const std::vector<int>& rightAsns,
                                                 PeerRelationship relationship);
  std::vector<PeeringSession> addPrivatePeering(int ix, int leftAsn, int rightAsn,
                                                PeerRelationship relationship = PeerRelationship::kPeer);
  /// Each AS peers with the exchange's route server only.
  std::vector<PeeringSession> addRsPeers(int ix, const std::vector<int>& asns);

  const std::vector<PeeringSession>& sessions() const { return sessions_; }

  void configure(RenderContext& ctx) override;
  void render(RenderContext& ctx) override;

 private:
  std::vector<PeeringSession> sessions_;
};

/// The router of `asn` that terminates sessions on exchange `ix`: the first
/// router by name with an interface there. Throws NotAtExchange.
const Node& exchangeRouter(const Base& base, int asn, int ix);

/// BIRD 2 configuration for a router or route server; nullopt for hosts and
/// when no routing layer was rendered.
std::optional<std::string> emitRouterConfig(const RenderedEmulation& rendered, const Node& node);

/// Commands the container must run before its own start commands: loopback
/// setup, default route for hosts, routing daemon launch.
std::vector<std::string> routingStartCommands(const RenderedEmulation& rendered, const Node& node);

/// Container interface name per attachment, in interface order: the network
/// name when it fits in 15 characters and is unique on the node, else "if{i}".
std::vector<std::string> interfaceNames(const Node& node);

inline constexpr const char* kBirdConfigPath = "/etc/bird/bird.conf";

}  // namespace emu

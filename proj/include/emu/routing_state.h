#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emu/ipv4.h"

namespace emu {

class Node;

/// Business relationship of an EBGP peering. For kProvider the left side
/// is the provider and the right side the customer.
enum class PeerRelationship { kProvider, kPeer, kUnfiltered };

std::string_view relationshipName(PeerRelationship relationship);

/// What the remote end of a BGP session is, seen from the local router.
enum class NeighborRole { kCustomer, kPeer, kProvider, kUnfiltered, kRouteServer, kRsClient };

std::string_view neighborRoleName(NeighborRole role);

struct BgpNeighbor {
  const Node* peer;
  int peerAsn;
  int ix;
  Ipv4Address localAddress;
  Ipv4Address peerAddress;
  NeighborRole role;
};

struct IbgpMesh {
  int asn = 0;
  /// Unordered router pairs, first < second by name.
  std::vector<std::pair<const Node*, const Node*>> sessionPairs;
};

/// One AS-level adjacency. Route-server participation expands into one
/// kPeer adjacency per participant pair with viaRouteServer set.
struct AsAdjacency {
  int ix;
  int leftAsn;
  int rightAsn;
  PeerRelationship relationship;
  bool viaRouteServer;
};

/// Routing facts produced at render; keyed by Node::key() so iteration is
/// deterministic.
struct RoutingState {
  bool routingEnabled = false;
  bool ebgpEnabled = false;
  std::map<std::string, Ipv4Address> loopbacks;
  std::map<int, IbgpMesh> ibgp;
  std::map<std::string, std::vector<BgpNeighbor>> ebgp;
  std::vector<AsAdjacency> adjacencies;
};

}  // namespace emu

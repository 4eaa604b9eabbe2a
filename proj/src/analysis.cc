#include "emu/analysis.h"

#include <algorithm>
#include <deque>
#include <queue>
#include <tuple>

#include "emu/error.h"

namespace emu {
namespace {

NeighborRole reverseRole(NeighborRole role) {
  switch (role) {
    case NeighborRole::kCustomer: return NeighborRole::kProvider;
    case NeighborRole::kProvider: return NeighborRole::kCustomer;
    case NeighborRole::kRouteServer: return NeighborRole::kRsClient;
    case NeighborRole::kRsClient: return NeighborRole::kRouteServer;
    case NeighborRole::kPeer:
    case NeighborRole::kUnfiltered: return role;
  }
  return role;
}

const std::vector<AsEdge> kNoEdges;

}  // namespace

// ---------------------------------------------------------------------------
// ControlPlaneModel

ControlPlaneModel ControlPlaneModel::fromRendered(const RenderedEmulation& rendered) {
  ControlPlaneModel model;
  for (const AutonomousSystem* as : rendered.base().autonomousSystems()) {
    model.addAs(as->asn());
    for (const auto& prefix : originatedPrefixes(*as)) model.originate(as->asn(), prefix);
  }
  for (const AsAdjacency& adjacency : rendered.routing().adjacencies) {
    model.addAdjacency(adjacency.ix, adjacency.leftAsn, adjacency.rightAsn, adjacency.relationship,
                       adjacency.viaRouteServer);
  }
  model.rendered_ = rendered;
  return model;
}

void ControlPlaneModel::addAs(int asn) { edges_.try_emplace(asn); }

void ControlPlaneModel::addAdjacency(int ix, int leftAsn, int rightAsn, PeerRelationship relationship,
                                     bool viaRouteServer) {
  if (leftAsn == rightAsn) throw Error(ErrorCode::kInvalidArgument, "self adjacency");
  addAs(leftAsn);
  addAs(rightAsn);
  NeighborRole right = NeighborRole::kPeer;
  if (relationship == PeerRelationship::kProvider) right = NeighborRole::kCustomer;
  if (relationship == PeerRelationship::kUnfiltered) right = NeighborRole::kUnfiltered;
  auto insert = [](std::vector<AsEdge>& list, AsEdge edge) {
    auto at = std::upper_bound(list.begin(), list.end(), edge, [](const AsEdge& a, const AsEdge& b) {
      return std::tie(a.neighborAsn, a.ix) < std::tie(b.neighborAsn, b.ix);
    });
    list.insert(at, edge);
  };
  insert(edges_[leftAsn], {ix, rightAsn, right, viaRouteServer});
  insert(edges_[rightAsn], {ix, leftAsn, reverseRole(right), viaRouteServer});
  adjacencyList_.emplace_back(ix, leftAsn, rightAsn, static_cast<int>(relationship), viaRouteServer);
}

void ControlPlaneModel::originate(int asn, Ipv4Prefix prefix) {
  addAs(asn);
  originations_[prefix].insert(asn);
}

std::vector<int> ControlPlaneModel::asns() const {
  std::vector<int> out;
  for (const auto& [asn, edges] : edges_) out.push_back(asn);
  return out;
}

const std::vector<AsEdge>& ControlPlaneModel::edges(int asn) const {
  auto it = edges_.find(asn);
  return it == edges_.end() ? kNoEdges : it->second;
}

ControlPlaneModel ControlPlaneModel::withAnnouncement(int asn, Ipv4Prefix prefix) const {
  if (!hasAs(asn)) throw Error(ErrorCode::kUnknownAs, "AS" + std::to_string(asn));
  ControlPlaneModel copy = *this;
  copy.originations_[prefix].insert(asn);
  return copy;
}

ControlPlaneModel ControlPlaneModel::withoutAnnouncement(int asn, Ipv4Prefix prefix) const {
  ControlPlaneModel copy = *this;
  auto it = copy.originations_.find(prefix);
  if (it != copy.originations_.end()) {
    it->second.erase(asn);
    if (it->second.empty()) copy.originations_.erase(it);
  }
  return copy;
}

// ---------------------------------------------------------------------------
// Route computation

const RibEntry* RibResult::find(int asn, const Ipv4Prefix& prefix) const {
  auto as = ases.find(asn);
  if (as == ases.end()) return nullptr;
  auto it = as->second.find(prefix);
  return it == as->second.end() ? nullptr : &it->second;
}

const RibEntry* RibResult::lookup(int asn, Ipv4Address address) const {
  auto as = ases.find(asn);
  if (as == ases.end()) return nullptr;
  const RibEntry* best = nullptr;
  for (const auto& [prefix, entry] : as->second) {
    if (prefix.contains(address) && (best == nullptr || prefix.length() > best->prefix.length())) best = &entry;
  }
  return best;
}

namespace {

struct Candidate {
  int asn;
  RibEntry entry;

  // Smaller is better: preference, path length, neighbor, then the path.
  auto key() const { return std::make_tuple(-entry.pref, entry.asPath.size(), entry.neighborAsn(), entry.asPath); }
  bool operator>(const Candidate& other) const {
    return std::make_pair(key(), asn) > std::make_pair(other.key(), other.asn);
  }
};

}  // namespace

// Every export strictly worsens (pref, length), so selecting routes best-first
// yields the stable assignment in one pass per prefix.
RibResult computeRibs(const ControlPlaneModel& model) {
  RibResult result;
  for (int asn : model.asns()) result.ases[asn];
  for (const auto& [prefix, origins] : model.originations()) {
    std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> queue;
    for (int origin : origins) {
      queue.push({origin, {prefix, {}, RouteClass::kOwn, routePreference(RouteClass::kOwn)}});
    }
    std::set<int> done;
    while (!queue.empty()) {
      Candidate best = queue.top();
      queue.pop();
      if (!done.insert(best.asn).second) continue;
      ++result.iterations;
      const RibEntry& selected = result.ases[best.asn].emplace(prefix, best.entry).first->second;
      for (const AsEdge& edge : model.edges(best.asn)) {
        if (done.contains(edge.neighborAsn)) continue;
        if (!exportAllowed(edge.role, selected.learnedFrom)) continue;
        if (std::find(selected.asPath.begin(), selected.asPath.end(), edge.neighborAsn) != selected.asPath.end()) {
          continue;
        }
        const RouteClass cls = importClass(reverseRole(edge.role));
        std::vector<int> path;
        path.reserve(selected.asPath.size() + 1);
        path.push_back(best.asn);
        path.insert(path.end(), selected.asPath.begin(), selected.asPath.end());
        queue.push({edge.neighborAsn, {prefix, std::move(path), cls, routePreference(cls)}});
      }
    }
  }
  return result;
}

std::map<std::string, std::vector<RibEntry>> routerRibs(const ControlPlaneModel& model, const RibResult& ribs) {
  std::map<std::string, std::vector<RibEntry>> out;
  const RenderedEmulation* rendered = model.rendered();
  if (rendered == nullptr) return out;
  for (const AutonomousSystem* as : rendered->base().autonomousSystems()) {
    std::vector<RibEntry> table;
    if (auto it = ribs.ases.find(as->asn()); it != ribs.ases.end()) {
      for (const auto& [prefix, entry] : it->second) table.push_back(entry);
    }
    for (const Node* router : as->routers()) out[router->key()] = table;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tracing

namespace {

/// Hop-count BFS over one AS's internal networks. Hosts only terminate paths.
struct IntraAs {
  std::map<const Node*, int> distance;
  std::map<const Node*, const Node*> parent;

  IntraAs(const Node& start) {
    std::deque<const Node*> queue{&start};
    distance[&start] = 0;
    while (!queue.empty()) {
      const Node* node = queue.front();
      queue.pop_front();
      if (node != &start && !node->isRouter()) continue;
      std::vector<const Node*> next;
      for (const auto& iface : node->interfaces()) {
        if (iface.network->isExchange()) continue;
        for (const auto& [peer, address] : iface.network->attachments()) {
          if (peer != nullptr && !distance.contains(peer)) next.push_back(peer);
        }
      }
      std::sort(next.begin(), next.end(), [](const Node* a, const Node* b) { return a->name() < b->name(); });
      for (const Node* peer : next) {
        if (distance.emplace(peer, distance[node] + 1).second) {
          parent[peer] = node;
          queue.push_back(peer);
        }
      }
    }
  }

  std::vector<const Node*> pathTo(const Node* target) const {
    std::vector<const Node*> path;
    for (const Node* at = target; at != nullptr;) {
      path.push_back(at);
      auto it = parent.find(at);
      at = it == parent.end() ? nullptr : it->second;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  /// Reachable candidate minimizing (distance, rank).
  template <typename Rank>
  const Node* nearest(const std::vector<const Node*>& candidates, Rank rank) const {
    const Node* best = nullptr;
    for (const Node* candidate : candidates) {
      auto it = distance.find(candidate);
      if (it == distance.end()) continue;
      if (best == nullptr || std::make_pair(it->second, rank(candidate)) <
                                 std::make_pair(distance.at(best), rank(best))) {
        best = candidate;
      }
    }
    return best;
  }
};

struct Egress {
  const Node* router;
  int ix;
  const Node* peer;
};

std::vector<Egress> egressesToward(const RoutingState& routing, const AutonomousSystem& as, int nextAsn,
                                   RouteClass routeClass) {
  std::vector<Egress> out;
  for (const Node* router : as.routers()) {
    auto sessions = routing.ebgp.find(router->key());
    if (sessions == routing.ebgp.end()) continue;
    for (const BgpNeighbor& neighbor : sessions->second) {
      if (importClass(neighbor.role) != routeClass) continue;
      if (neighbor.role == NeighborRole::kRouteServer) {
        auto clients = routing.ebgp.find(neighbor.peer->key());
        if (clients == routing.ebgp.end()) continue;
        for (const BgpNeighbor& client : clients->second) {
          if (client.peerAsn == nextAsn) out.push_back({router, neighbor.ix, client.peer});
        }
      } else if (neighbor.peerAsn == nextAsn) {
        out.push_back({router, neighbor.ix, neighbor.peer});
      }
    }
  }
  return out;
}

}  // namespace

TraceResult tracePath(const ControlPlaneModel& model, const RibResult& ribs, std::string_view sourceKey,
                      Ipv4Address destination) {
  const RenderedEmulation* rendered = model.rendered();
  if (rendered == nullptr) throw Error(ErrorCode::kInvalidArgument, "model has no rendered emulation to trace");
  const Node* source = rendered->findNode(sourceKey);
  if (source == nullptr) throw Error(ErrorCode::kUnknownNode, std::string(sourceKey));
  if (source->exchangeScoped()) throw Error(ErrorCode::kInvalidArgument, "cannot trace from a route server");

  const Base& base = rendered->base();
  TraceResult result;
  result.hops.push_back(source->key());
  result.asPath.push_back(source->asn());
  const Node* current = source;
  std::set<int> visited{source->asn()};

  auto append = [&](const std::vector<const Node*>& path) {
    for (size_t i = 1; i < path.size(); ++i) result.hops.push_back(path[i]->key());
  };
  auto byName = [](const Node* node) { return node->name(); };

  while (true) {
    const AutonomousSystem& as = base.getAutonomousSystem(current->asn());
    IntraAs intra(*current);

    const Network* local = nullptr;
    for (const Network* network : as.networks()) {
      if (network->prefix().contains(destination) &&
          (local == nullptr || network->prefix().length() > local->prefix().length())) {
        local = network;
      }
    }
    const RibEntry* route = ribs.lookup(as.asn(), destination);
    // A host reaches its own subnets directly; everything else follows the
    // routers' longest match.
    bool direct = false;
    if (current->isHost()) {
      for (const auto& iface : current->interfaces()) {
        if (iface.network->prefix().contains(destination)) {
          local = iface.network;
          direct = true;
        }
      }
    }

    if (local != nullptr &&
        (direct || route == nullptr || local->prefix().length() >= route->prefix.length())) {
      std::vector<const Node*> attached;
      const Node* exact = nullptr;
      for (const auto& [node, address] : local->attachments()) {
        if (node == nullptr) continue;
        attached.push_back(node);
        if (address == destination) exact = node;
      }
      const Node* target = exact != nullptr ? (intra.distance.contains(exact) ? exact : nullptr)
                                            : intra.nearest(attached, byName);
      if (target == nullptr) {
        result.reason = "no path inside AS" + std::to_string(as.asn());
        return result;
      }
      append(intra.pathTo(target));
      result.reachable = true;
      result.reason = "delivered on " + local->qualifiedName();
      return result;
    }
    if (route == nullptr) {
      result.reason = "no route in AS" + std::to_string(as.asn());
      return result;
    }

    if (route->learnedFrom == RouteClass::kOwn) {
      std::vector<const Node*> announcing;
      std::vector<const Node*> routers = as.routers();
      for (const Node* router : routers) {
        const auto& prefixes = router->announcedPrefixes();
        if (std::find(prefixes.begin(), prefixes.end(), route->prefix) != prefixes.end()) announcing.push_back(router);
      }
      const Node* target = intra.nearest(announcing.empty() ? routers : announcing, byName);
      if (target == nullptr) target = current;
      append(intra.pathTo(target));
      result.reachable = true;
      result.reason = "originated by AS" + std::to_string(as.asn());
      return result;
    }

    const int next = route->neighborAsn();
    if (visited.contains(next)) {
      result.reason = "forwarding loop at AS" + std::to_string(next);
      return result;
    }
    auto egresses = egressesToward(rendered->routing(), as, next, route->learnedFrom);
    std::vector<const Node*> routers;
    for (const auto& egress : egresses) routers.push_back(egress.router);
    const Node* exit = intra.nearest(routers, byName);
    if (exit == nullptr) {
      result.reason = "no reachable session toward AS" + std::to_string(next);
      return result;
    }
    const Egress* chosen = nullptr;
    for (const auto& egress : egresses) {
      if (egress.router == exit && (chosen == nullptr || egress.ix < chosen->ix)) chosen = &egress;
    }
    append(intra.pathTo(exit));
    result.hops.push_back(chosen->peer->key());
    result.asPath.push_back(next);
    visited.insert(next);
    current = chosen->peer;
  }
}

TraceResult tracePath(const ControlPlaneModel& model, std::string_view sourceKey, Ipv4Address destination) {
  return tracePath(model, computeRibs(model), sourceKey, destination);
}

std::optional<std::string> representativeNode(const RenderedEmulation& rendered, int asn) {
  const AutonomousSystem* as = rendered.base().findAutonomousSystem(asn);
  if (as == nullptr) return std::nullopt;
  auto hosts = as->hosts();
  if (!hosts.empty()) return hosts.front()->key();
  auto routers = as->routers();
  if (!routers.empty()) return routers.front()->key();
  return std::nullopt;
}

PathDiff whatIfAnnounce(const ControlPlaneModel& model, int attackerAsn, Ipv4Prefix prefix) {
  if (!model.hasAs(attackerAsn)) throw Error(ErrorCode::kUnknownAs, "AS" + std::to_string(attackerAsn));
  const RenderedEmulation* rendered = model.rendered();
  if (rendered == nullptr) throw Error(ErrorCode::kInvalidArgument, "model has no rendered emulation to trace");

  PathDiff diff;
  std::optional<Ipv4Address> target;
  for (const Node* node : rendered->nodes()) {
    for (const auto& iface : node->interfaces()) {
      if (prefix.contains(iface.address) && (!target || iface.address < *target)) target = iface.address;
    }
  }
  diff.target = target ? *target : (prefix.length() >= 31 ? prefix.network() : prefix.at(1));

  const RibResult before = computeRibs(model);
  const ControlPlaneModel hijacked = model.withAnnouncement(attackerAsn, prefix);
  const RibResult after = computeRibs(hijacked);
  for (int asn : model.asns()) {
    if (asn == attackerAsn) continue;
    auto source = representativeNode(*rendered, asn);
    if (!source) continue;
    diff.sources.emplace_back(asn, *source);
    TraceResult old = tracePath(model, before, *source, diff.target);
    TraceResult now = tracePath(hijacked, after, *source, diff.target);
    if (old != now) diff.changed.push_back({asn, *source, std::move(old), std::move(now)});
  }
  return diff;
}

}  // namespace emu

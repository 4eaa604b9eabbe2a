#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "emu/emulator.h"
#include "emu/ipv4.h"
#include "emu/routing.h"
#include "emu/routing_state.h"

namespace emu {

/// One EBGP adjacency seen from its owner. `role` is what the neighbor is to
/// the owner.
struct AsEdge {
  int ix;
  int neighborAsn;
  NeighborRole role;
  bool viaRouteServer;
};

struct RibEntry {
  Ipv4Prefix prefix;
  /// Next AS first, origin last; empty for own routes.
  std::vector<int> asPath;
  RouteClass learnedFrom;
  int pref;

  int neighborAsn() const { return asPath.empty() ? 0 : asPath.front(); }
  friend bool operator==(const RibEntry&, const RibEntry&) = default;
};

/// AS-level view of the control plane, derived from a rendered emulation or
/// assembled directly (for what-if studies and tests).
class ControlPlaneModel {
 public:
  ControlPlaneModel() = default;
  static ControlPlaneModel fromRendered(const RenderedEmulation& rendered);

  void addAs(int asn);
  /// For kProvider `leftAsn` is the provider.
  void addAdjacency(int ix, int leftAsn, int rightAsn, PeerRelationship relationship, bool viaRouteServer = false);
  void originate(int asn, Ipv4Prefix prefix);

  bool hasAs(int asn) const { return edges_.contains(asn); }
  std::vector<int> asns() const;
  /// Per AS, ordered by (neighbor, ix).
  const std::vector<AsEdge>& edges(int asn) const;
  /// prefix -> originating ASes.
  const std::map<Ipv4Prefix, std::set<int>>& originations() const { return originations_; }

  ControlPlaneModel withAnnouncement(int asn, Ipv4Prefix prefix) const;
  ControlPlaneModel withoutAnnouncement(int asn, Ipv4Prefix prefix) const;

  /// Set when built from a rendered emulation; tracing needs it.
  const RenderedEmulation* rendered() const { return rendered_.valid() ? &rendered_ : nullptr; }

  friend bool operator==(const ControlPlaneModel& a, const ControlPlaneModel& b) {
    return a.originations_ == b.originations_ && a.adjacencyList_ == b.adjacencyList_;
  }

 private:
  std::map<int, std::vector<AsEdge>> edges_;
  std::vector<std::tuple<int, int, int, int, bool>> adjacencyList_;
  std::map<Ipv4Prefix, std::set<int>> originations_;
  RenderedEmulation rendered_;
};

struct RibResult {
  /// asn -> prefix -> selected route.
  std::map<int, std::map<Ipv4Prefix, RibEntry>> ases;
  /// Route selections made; at most |ASes| per prefix.
  size_t iterations = 0;

  const RibEntry* find(int asn, const Ipv4Prefix& prefix) const;
  /// Longest-prefix match in one AS's table.
  const RibEntry* lookup(int asn, Ipv4Address address) const;
};

RibResult computeRibs(const ControlPlaneModel& model);

/// Router key -> its table. Every router of an AS carries the AS selection.
std::map<std::string, std::vector<RibEntry>> routerRibs(const ControlPlaneModel& model, const RibResult& ribs);

struct TraceResult {
  bool reachable = false;
  /// Node keys, source first.
  std::vector<std::string> hops;
  /// ASes traversed, source first.
  std::vector<int> asPath;
  std::string reason;

  friend bool operator==(const TraceResult&, const TraceResult&) = default;
};

TraceResult tracePath(const ControlPlaneModel& model, const RibResult& ribs, std::string_view sourceKey,
                      Ipv4Address destination);
TraceResult tracePath(const ControlPlaneModel& model, std::string_view sourceKey, Ipv4Address destination);

struct PathChange {
  int sourceAsn;
  std::string sourceNode;
  TraceResult before;
  TraceResult after;
};

struct PathDiff {
  Ipv4Address target;
  /// Every AS that was traced, with its representative node.
  std::vector<std::pair<int, std::string>> sources;
  std::vector<PathChange> changed;
};

/// Representative node of an AS for what-if tracing: its first host, else
/// its first router.
std::optional<std::string> representativeNode(const RenderedEmulation& rendered, int asn);

/// Adds an origination of `prefix` by `attackerAsn` and reports every other
/// AS whose path toward the prefix changed. Throws UnknownAs.
PathDiff whatIfAnnounce(const ControlPlaneModel& model, int attackerAsn, Ipv4Prefix prefix);

}  // namespace emu

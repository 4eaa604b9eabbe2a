#include <gtest/gtest.h>

#include "emu/analysis.h"
#include "expect_error.h"
#include "fixtures.h"
#include "oracles.h"

namespace {

using emu::Ipv4Address;
using emu::Ipv4Prefix;
using emu::PeerRelationship;
using emu::RouteClass;

const Ipv4Prefix kVictimNet = Ipv4Prefix::fromString("10.151.0.0/24");

// The analyzer's selection for one prefix in the oracle's terms.
oracle::Outcome outcomeOf(const emu::RibResult& ribs, const Ipv4Prefix& prefix) {
  oracle::Outcome out;
  for (const auto& [asn, table] : ribs.ases) {
    auto it = table.find(prefix);
    if (it == table.end()) continue;
    out[asn] = {it->second.asPath, static_cast<int>(it->second.learnedFrom)};
  }
  return out;
}

void expectMatchesOracle(const emu::ControlPlaneModel& model, const std::string& label) {
  const auto ribs = emu::computeRibs(model);
  for (const auto& [prefix, origins] : model.originations()) {
    const auto stable = oracle::stableOutcomes(model, prefix);
    ASSERT_EQ(stable.size(), 1u) << label << " " << prefix.toString();
    EXPECT_EQ(outcomeOf(ribs, prefix), stable[0]) << label << " " << prefix.toString();
  }
}

TEST(Ribs, CustomerRouteAtProvider) {
  emu::ControlPlaneModel model;
  model.addAdjacency(103, 3, 160, PeerRelationship::kProvider);
  model.originate(160, Ipv4Prefix::fromString("10.160.0.0/24"));
  model.originate(3, Ipv4Prefix::fromString("10.3.0.0/24"));
  const auto ribs = emu::computeRibs(model);
  const auto* entry = ribs.find(3, Ipv4Prefix::fromString("10.160.0.0/24"));
  ASSERT_NE(entry, nullptr);
  EXPECT_EQ(entry->learnedFrom, RouteClass::kCustomer);
  EXPECT_EQ(entry->pref, 30);
  EXPECT_EQ(entry->asPath, std::vector<int>{160});
  const auto* up = ribs.find(160, Ipv4Prefix::fromString("10.3.0.0/24"));
  ASSERT_NE(up, nullptr);
  EXPECT_EQ(up->learnedFrom, RouteClass::kProvider);
  expectMatchesOracle(model, "chain");
}

TEST(Ribs, IsolatedAsHoldsOwnPrefixesOnly) {
  emu::ControlPlaneModel model;
  model.originate(150, Ipv4Prefix::fromString("10.150.0.0/24"));
  model.originate(160, Ipv4Prefix::fromString("10.160.0.0/24"));
  const auto ribs = emu::computeRibs(model);
  ASSERT_EQ(ribs.ases.at(150).size(), 1u);
  const auto& own = ribs.ases.at(150).begin()->second;
  EXPECT_EQ(own.learnedFrom, RouteClass::kOwn);
  EXPECT_TRUE(own.asPath.empty());
  EXPECT_EQ(ribs.find(150, Ipv4Prefix::fromString("10.160.0.0/24")), nullptr);
}

TEST(Ribs, EmptyModel) {
  const auto ribs = emu::computeRibs(emu::ControlPlaneModel());
  EXPECT_TRUE(ribs.ases.empty());
  EXPECT_EQ(ribs.iterations, 0u);
}

TEST(Ribs, PeerRoutesNotLeakedToProviders) {
  // 10 - peer - 20, 30 is a provider of 20: 30 must not learn 10's prefix.
  emu::ControlPlaneModel model;
  model.addAdjacency(1, 10, 20, PeerRelationship::kPeer);
  model.addAdjacency(1, 30, 20, PeerRelationship::kProvider);
  model.originate(10, Ipv4Prefix::fromString("10.10.0.0/24"));
  const auto ribs = emu::computeRibs(model);
  EXPECT_NE(ribs.find(20, Ipv4Prefix::fromString("10.10.0.0/24")), nullptr);
  EXPECT_EQ(ribs.find(30, Ipv4Prefix::fromString("10.10.0.0/24")), nullptr);
  expectMatchesOracle(model, "leak");
}

TEST(Ribs, TieBreakLowestNeighbor) {
  emu::ControlPlaneModel model;
  model.addAdjacency(1, 5, 9, PeerRelationship::kProvider);
  model.addAdjacency(1, 4, 9, PeerRelationship::kProvider);
  model.addAdjacency(1, 4, 7, PeerRelationship::kPeer);
  model.addAdjacency(1, 5, 7, PeerRelationship::kPeer);
  model.originate(7, Ipv4Prefix::fromString("10.7.0.0/24"));
  const auto ribs = emu::computeRibs(model);
  EXPECT_EQ(ribs.find(9, Ipv4Prefix::fromString("10.7.0.0/24"))->asPath, (std::vector<int>{4, 7}));
  expectMatchesOracle(model, "tie");
}

TEST(Ribs, OracleEquivalenceSample) {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    const auto model = oracle::randomModel(seed, 5, seed % 2 == 0);
    expectMatchesOracle(model, "seed " + std::to_string(seed));
    size_t prefixes = model.originations().size();
    EXPECT_LE(emu::computeRibs(model).iterations, model.asns().size() * prefixes);
  }
}

TEST(Ribs, ValleyFreeWithoutUnfiltered) {
  for (uint64_t seed = 100; seed < 140; ++seed) {
    const auto model = oracle::randomModel(seed, 5, false);
    const auto ribs = emu::computeRibs(model);
    for (const auto& [asn, table] : ribs.ases) {
      for (const auto& [prefix, entry] : table) {
        EXPECT_TRUE(oracle::valleyFree(model, asn, entry.asPath)) << seed << " AS" << asn << " " << prefix.toString();
      }
    }
  }
}

TEST(Ribs, RouteServerTransparent) {
  emu::ControlPlaneModel model;
  model.addAdjacency(100, 2, 4, PeerRelationship::kPeer, true);
  model.originate(2, Ipv4Prefix::fromString("10.2.0.0/24"));
  const auto ribs = emu::computeRibs(model);
  EXPECT_EQ(ribs.find(4, Ipv4Prefix::fromString("10.2.0.0/24"))->asPath, std::vector<int>{2});
}

TEST(Ribs, ModelRebuildIsIdentical) {
  auto rendered = fixture::morris(1).render();
  EXPECT_EQ(emu::ControlPlaneModel::fromRendered(rendered), emu::ControlPlaneModel::fromRendered(rendered));
}

TEST(Ribs, EveryRouterCarriesItsAsSelection) {
  auto rendered = fixture::morris(1).render();
  const auto model = emu::ControlPlaneModel::fromRendered(rendered);
  const auto ribs = emu::computeRibs(model);
  const auto perRouter = emu::routerRibs(model, ribs);
  size_t routers = 0;
  for (const emu::Node* node : rendered.nodes()) {
    if (!node->isRouter()) continue;
    ++routers;
    const auto& table = perRouter.at(node->key());
    std::vector<emu::RibEntry> expected;
    for (const auto& [prefix, entry] : ribs.ases.at(node->asn())) expected.push_back(entry);
    EXPECT_EQ(table, expected) << node->key();
  }
  EXPECT_EQ(perRouter.size(), routers);
}

TEST(Ribs, MorrisMatchesOracle) {
  auto rendered = fixture::morris(1).render();
  const auto model = emu::ControlPlaneModel::fromRendered(rendered);
  const auto ribs = emu::computeRibs(model);
  // Every stub reaches every other stub.
  for (int a : {150, 154, 162, 171}) {
    for (int b : {151, 153, 160, 164, 170}) {
      const auto* entry = ribs.lookup(a, Ipv4Address::fromString("10." + std::to_string(b) + ".0.71"));
      ASSERT_NE(entry, nullptr) << a << " -> " << b;
      EXPECT_EQ(entry->asPath.back(), b);
    }
  }
}

TEST(Trace, ViaSharedProvider) {
  auto rendered = fixture::hijack().render();
  const auto model = emu::ControlPlaneModel::fromRendered(rendered);
  const auto trace = emu::tracePath(model, "160/host0", Ipv4Address::fromString("10.161.0.71"));
  ASSERT_TRUE(trace.reachable) << trace.reason;
  EXPECT_EQ(trace.asPath, (std::vector<int>{160, 3, 161}));
  EXPECT_EQ(trace.hops.front(), "160/host0");
  EXPECT_EQ(trace.hops.back(), "161/host0");
  EXPECT_TRUE(oracle::valleyFree(model, 160, {3, 161}));
}

TEST(Trace, LocalDelivery) {
  auto rendered = fixture::hijack().render();
  const auto model = emu::ControlPlaneModel::fromRendered(rendered);
  const auto trace = emu::tracePath(model, "160/host0", Ipv4Address::fromString("10.160.0.72"));
  ASSERT_TRUE(trace.reachable);
  EXPECT_EQ(trace.asPath, std::vector<int>{160});
  EXPECT_EQ(trace.hops, (std::vector<std::string>{"160/host0", "160/host1"}));
}

TEST(Trace, IsolatedPairUnreachable) {
  emu::Emulator emulator;
  auto base = std::make_shared<emu::Base>();
  base->createInternetExchange(100);
  for (int asn : {150, 151}) {
    auto& as = base->createAutonomousSystem(asn);
    as.createNetwork("net0");
    as.createRouter("router0").joinNetwork("net0").joinNetwork("ix100");
    as.createHost("host0").joinNetwork("net0");
  }
  emulator.addLayer(base);
  emulator.addLayer(std::make_shared<emu::Routing>());
  emulator.addLayer(std::make_shared<emu::Ebgp>());
  auto rendered = emulator.render();
  const auto model = emu::ControlPlaneModel::fromRendered(rendered);
  const auto trace = emu::tracePath(model, "150/host0", Ipv4Address::fromString("10.151.0.71"));
  EXPECT_FALSE(trace.reachable);
  EXPECT_FALSE(trace.reason.empty());
}

TEST(Trace, UnknownNode) {
  auto rendered = fixture::hijack().render();
  const auto model = emu::ControlPlaneModel::fromRendered(rendered);
  EXPECT_EQ(codeOf([&] { emu::tracePath(model, "999/nobody", Ipv4Address::fromString("10.1.1.1")); }),
            emu::ErrorCode::kUnknownNode);
}

// Origin each AS ends up at for `prefix` according to the oracle.
std::map<int, int> oracleOrigins(const emu::ControlPlaneModel& model, const Ipv4Prefix& prefix) {
  const auto stable = oracle::stableOutcomes(model, prefix);
  std::map<int, int> out;
  if (stable.size() != 1) return out;
  for (const auto& [asn, route] : stable[0]) out[asn] = route.path.empty() ? asn : route.path.back();
  return out;
}

TEST(WhatIf, ExactPrefixFlipsCustomerPreferringSources) {
  auto rendered = fixture::hijack().render();
  const auto model = emu::ControlPlaneModel::fromRendered(rendered);
  const auto diff = emu::whatIfAnnounce(model, 161, kVictimNet);
  const auto origins = oracleOrigins(model.withAnnouncement(161, kVictimNet), kVictimNet);
  ASSERT_FALSE(origins.empty());
  std::set<int> expected;
  for (const auto& [asn, origin] : origins) {
    if (asn != 161 && origin == 161) expected.insert(asn);
  }
  std::set<int> flipped;
  for (const auto& change : diff.changed) {
    flipped.insert(change.sourceAsn);
    EXPECT_EQ(change.after.asPath.back(), 161);
  }
  EXPECT_EQ(flipped, expected);
  EXPECT_EQ(expected, (std::set<int>{3, 160}));
}

TEST(WhatIf, ContainmentKeepsVictimOnItsProviderChain) {
  auto rendered = fixture::hijack().render();
  const auto model = emu::ControlPlaneModel::fromRendered(rendered);
  const auto diff = emu::whatIfAnnounce(model, 161, kVictimNet);
  for (const auto& change : diff.changed) {
    EXPECT_NE(change.sourceAsn, 2);
    EXPECT_NE(change.sourceAsn, 150);
  }
}

TEST(WhatIf, MoreSpecificFlipsEveryOtherSource) {
  auto rendered = fixture::hijack().render();
  const auto model = emu::ControlPlaneModel::fromRendered(rendered);
  const auto half = Ipv4Prefix::fromString("10.151.0.0/25");
  const auto diff = emu::whatIfAnnounce(model, 161, half);
  std::set<int> flipped;
  for (const auto& change : diff.changed) {
    flipped.insert(change.sourceAsn);
    EXPECT_TRUE(change.after.reachable);
    EXPECT_EQ(change.after.asPath.back(), 161);
  }
  // The victim delivers on its own subnet.
  EXPECT_EQ(flipped, (std::set<int>{2, 3, 150, 160}));
}

TEST(WhatIf, WithdrawRestoresPaths) {
  auto rendered = fixture::hijack().render();
  const auto model = emu::ControlPlaneModel::fromRendered(rendered);
  const auto half = Ipv4Prefix::fromString("10.151.0.0/25");
  const auto restored = model.withAnnouncement(161, half).withoutAnnouncement(161, half);
  EXPECT_EQ(restored, model);
  const auto target = Ipv4Address::fromString("10.151.0.71");
  for (int asn : {2, 3, 150, 160}) {
    const auto source = *emu::representativeNode(rendered, asn);
    EXPECT_EQ(emu::tracePath(restored, source, target), emu::tracePath(model, source, target)) << asn;
  }
}

TEST(WhatIf, AnnouncementNobodyRoutesToEmptyDiff) {
  // AS-170 has no sessions, so nobody picks up what it originates.
  emu::Emulator emulator(1);
  auto base = std::make_shared<emu::Base>();
  base->createInternetExchange(100);
  for (int asn : {150, 151, 170}) {
    auto& as = base->createAutonomousSystem(asn);
    as.createNetwork("net0");
    as.createRouter("router0").joinNetwork("net0").joinNetwork("ix100");
    as.createHost("host0").joinNetwork("net0");
  }
  auto ebgp = std::make_shared<emu::Ebgp>();
  ebgp->addPrivatePeering(100, 150, 151, PeerRelationship::kPeer);
  emulator.addLayer(base);
  emulator.addLayer(std::make_shared<emu::Routing>());
  emulator.addLayer(ebgp);
  auto rendered = emulator.render();
  const auto model = emu::ControlPlaneModel::fromRendered(rendered);
  const auto diff = emu::whatIfAnnounce(model, 170, kVictimNet);
  EXPECT_TRUE(diff.changed.empty());
  EXPECT_EQ(diff.sources.size(), 2u);
}

TEST(WhatIf, UnknownAttacker) {
  auto rendered = fixture::hijack().render();
  const auto model = emu::ControlPlaneModel::fromRendered(rendered);
  EXPECT_EQ(codeOf([&] { emu::whatIfAnnounce(model, 999, kVictimNet); }), emu::ErrorCode::kUnknownAs);
}

}  // namespace

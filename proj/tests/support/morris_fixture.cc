// The worm lab topology. Kept short on purpose: the acceptance suite checks
// its statement count.
#include "fixtures.h"

#include "emu/routing.h"

namespace fixture {

std::filesystem::path morrisSource() { return __FILE__; }

emu::Emulator morris(uint64_t seed) {
  emu::Emulator emu(seed);
  auto base = std::make_shared<emu::Base>();
  auto ebgp = std::make_shared<emu::Ebgp>();

  for (int ix = 100; ix <= 104; ++ix) base->createInternetExchange(ix);

  // Transit ASes: one router per exchange, chained by internal networks.
  auto makeTransit = [&](int asn, std::vector<int> exchanges) {
    auto& as = base->createAutonomousSystem(asn);
    for (size_t i = 0; i + 1 < exchanges.size(); ++i) as.createNetwork("net" + std::to_string(i));
    for (size_t i = 0; i < exchanges.size(); ++i) {
      auto& r = as.createRouter("r" + std::to_string(i)).joinNetwork("ix" + std::to_string(exchanges[i]));
      if (i > 0) r.joinNetwork("net" + std::to_string(i - 1));
      if (i + 1 < exchanges.size()) r.joinNetwork("net" + std::to_string(i));
    }
  };
  makeTransit(2, {100, 101, 102, 103, 104});
  makeTransit(3, {100, 101, 102, 103, 104});
  makeTransit(4, {100, 102, 103, 104});
  makeTransit(11, {101, 102});
  makeTransit(12, {101, 104});

  // Stub ASes: one network, one router, 20 hosts running the vulnerable server.
  auto makeStub = [&](int asn, int ix) {
    auto& as = base->createAutonomousSystem(asn);
    as.createNetwork("net0");
    as.createRouter("router0").joinNetwork("net0").joinNetwork("ix" + std::to_string(ix));
    for (int i = 0; i < 20; ++i) {
      as.createHost("host" + std::to_string(i))
          .joinNetwork("net0")
          .setFile("#!/bin/sh\nexec /bof/server\n", "/bof/run.sh")
          .appendStartCommand("sh /bof/run.sh &");
    }
  };
  for (int asn : {150, 151, 152}) makeStub(asn, 100);
  for (int asn : {153, 154}) makeStub(asn, 101);
  for (int asn : {160, 161, 162}) makeStub(asn, 102);
  for (int asn : {163, 164}) makeStub(asn, 103);
  for (int asn : {170, 171}) makeStub(asn, 104);

  for (int ix = 100; ix <= 104; ++ix) ebgp->addRsPeers(ix, ix == 101 ? std::vector<int>{2, 3} : std::vector<int>{2, 3, 4});
  ebgp->addPrivatePeerings(100, {2, 3}, {150, 151, 152}, emu::PeerRelationship::kProvider);
  ebgp->addPrivatePeerings(101, {2, 12}, {153, 154}, emu::PeerRelationship::kProvider);
  ebgp->addPrivatePeerings(102, {3, 11}, {160, 161, 162}, emu::PeerRelationship::kProvider);
  ebgp->addPrivatePeerings(103, {2, 4}, {163, 164}, emu::PeerRelationship::kProvider);
  ebgp->addPrivatePeerings(104, {3, 4}, {170, 171}, emu::PeerRelationship::kProvider);
  ebgp->addPrivatePeering(101, 2, 11, emu::PeerRelationship::kProvider);
  ebgp->addPrivatePeering(104, 3, 12, emu::PeerRelationship::kProvider);

  emu.addLayer(base);
  emu.addLayer(std::make_shared<emu::Routing>());
  emu.addLayer(ebgp);
  return emu;
}

}  // namespace fixture

#include "fixtures.h"

#include "emu/routing.h"

namespace fixture {

emu::Emulator scaling(int ases, int perIx, uint64_t seed) {
  emu::Emulator emulator(seed);
  auto base = std::make_shared<emu::Base>();
  auto ebgp = std::make_shared<emu::Ebgp>();
  const int exchanges = ases / perIx;
  for (int x = 0; x < exchanges; ++x) {
    const int ix = 2 + x;
    base->createInternetExchange(ix);
    std::vector<int> members;
    for (int k = 0; k < perIx; ++k) {
      const int index = x * perIx + k;
      const int asn = 1000 + index;
      auto& as = base->createAutonomousSystem(asn);
      // 11.0.0.0/8 carved into /24s, one per AS.
      as.createNetwork("net0", emu::Ipv4Prefix(emu::Ipv4Address((11u << 24) | (static_cast<uint32_t>(index) << 8)), 24));
      as.createRouter("router0")
          .joinNetwork("net0")
          .joinNetwork("ix" + std::to_string(ix), emu::Ipv4Address((10u << 24) | (ix << 16) | (k + 1)));
      members.push_back(asn);
    }
    for (size_t a = 0; a < members.size(); ++a) {
      for (size_t b = a + 1; b < members.size(); ++b) {
        ebgp->addPrivatePeering(ix, members[a], members[b], emu::PeerRelationship::kUnfiltered);
      }
    }
  }
  emulator.addLayer(base);
  emulator.addLayer(std::make_shared<emu::Routing>());
  emulator.addLayer(ebgp);
  return emulator;
}

emu::Emulator ibgpChain(int routers) {
  emu::Emulator emulator(1);
  auto base = std::make_shared<emu::Base>();
  base->createInternetExchange(100);
  auto& transit = base->createAutonomousSystem(2);
  for (int i = 0; i + 1 < routers; ++i) transit.createNetwork("net" + std::to_string(i));
  for (int i = 0; i < routers; ++i) {
    auto& r = transit.createRouter("r" + std::to_string(i));
    if (i > 0) r.joinNetwork("net" + std::to_string(i - 1));
    if (i + 1 < routers) r.joinNetwork("net" + std::to_string(i));
  }
  // A network for the single-router case so the AS announces something.
  if (routers == 1) {
    transit.createNetwork("net0");
    transit.getRouter("r0").joinNetwork("net0");
  }
  transit.getRouter("r0").joinNetwork("ix100");
  auto& stub = base->createAutonomousSystem(150);
  stub.createNetwork("net0");
  stub.createRouter("router0").joinNetwork("net0").joinNetwork("ix100");
  auto ebgp = std::make_shared<emu::Ebgp>();
  ebgp->addPrivatePeering(100, 2, 150, emu::PeerRelationship::kProvider);
  emulator.addLayer(base);
  emulator.addLayer(std::make_shared<emu::Routing>());
  emulator.addLayer(ebgp);
  return emulator;
}

emu::Emulator transitExample() {
  emu::Emulator emulator(1);
  auto base = std::make_shared<emu::Base>();
  for (int ix : {100, 101, 102}) base->createInternetExchange(ix);
  auto& as2 = base->createAutonomousSystem(2);
  for (const char* net : {"net0", "net1", "net2"}) as2.createNetwork(net);
  as2.createRouter("r0").joinNetwork("ix100").joinNetwork("net0");
  as2.createRouter("r1").joinNetwork("net0").joinNetwork("net1");
  as2.createRouter("r2").joinNetwork("net1").joinNetwork("net2");
  as2.createRouter("r3").joinNetwork("net2").joinNetwork("ix102");
  as2.getRouter("r1").joinNetwork("ix101");
  emulator.addLayer(base);
  emulator.addLayer(std::make_shared<emu::Routing>());
  return emulator;
}

std::shared_ptr<emu::Base> smallBase(int hostsPerStub, bool shifted) {
  auto base = std::make_shared<emu::Base>();
  for (int ix : {100, 101}) base->createInternetExchange(ix);
  for (int asn : {2, 3}) {
    auto& as = base->createAutonomousSystem(asn);
    as.createNetwork("net0");
    as.createRouter("r0").joinNetwork("net0").joinNetwork("ix100");
    as.createRouter("r1").joinNetwork("net0").joinNetwork("ix101");
  }
  for (int asn : {150, 151, 152, 160, 161, 162, 171}) {
    auto& as = base->createAutonomousSystem(asn);
    if (shifted) as.createNetwork("dmz");
    as.createNetwork("net0");
    as.createRouter("router0").joinNetwork("net0").joinNetwork(asn < 160 ? "ix100" : "ix101");
    for (int i = 0; i < hostsPerStub; ++i) as.createHost("host" + std::to_string(i)).joinNetwork("net0");
  }
  return base;
}

void addSmallInternetRouting(emu::Emulator& emulator) {
  auto ebgp = std::make_shared<emu::Ebgp>();
  ebgp->addPrivatePeerings(100, {2, 3}, {150, 151, 152}, emu::PeerRelationship::kProvider);
  ebgp->addPrivatePeerings(101, {2, 3}, {160, 161, 162, 171}, emu::PeerRelationship::kProvider);
  ebgp->addPrivatePeering(100, 2, 3, emu::PeerRelationship::kPeer);
  emulator.addLayer(std::make_shared<emu::Routing>());
  emulator.addLayer(ebgp);
}

std::shared_ptr<emu::DomainNameService> exampleDns() {
  auto dns = std::make_shared<emu::DomainNameService>();
  dns->install("root-a").addZone(".").setMaster();
  dns->install("root-b").addZone(".");
  dns->install("com-a").addZone("com.").setMaster();
  dns->install("com-b").addZone("com.");
  dns->install("edu").addZone("edu.");
  dns->install("ns-example-com").addZone("example.com.");
  dns->install("ns-syr-edu").addZone("syr.edu.");
  dns->install("ns-google-com").addZone("google.com.");
  dns->getZone("example.com.").addRecord("@ A 2.2.2.2").addRecord("www A 5.5.5.5").addRecord("xyz A 5.5.5.6");
  return dns;
}

void bindExampleDns(emu::Emulator& emulator) {
  auto bind = [&](const char* vnode, int asn) {
    emu::Binding binding;
    binding.vnode = vnode;
    binding.filter.asn = asn;
    emulator.addBinding(binding);
  };
  bind("root-a", 171);
  bind("root-b", 150);
  bind("com-a", 151);
  bind("ns-syr-edu", 152);
  // Extra servers, placed on spare stubs.
  bind("com-b", 160);
  bind("edu", 161);
  bind("ns-example-com", 162);
  bind("ns-google-com", 160);
}

emu::Emulator hijack() {
  emu::Emulator emulator(1);
  auto base = std::make_shared<emu::Base>();
  for (int ix : {100, 101}) base->createInternetExchange(ix);
  for (int asn : {2, 3}) {
    auto& as = base->createAutonomousSystem(asn);
    as.createNetwork("net0");
    as.createRouter("r0").joinNetwork("net0").joinNetwork("ix100");
    as.createRouter("r1").joinNetwork("net0").joinNetwork("ix101");
    as.createHost("host0").joinNetwork("net0");
  }
  for (int asn : {150, 151, 160, 161}) {
    auto& as = base->createAutonomousSystem(asn);
    as.createNetwork("net0");
    as.createRouter("router0").joinNetwork("net0").joinNetwork(asn < 160 ? "ix100" : "ix101");
    as.createHost("host0").joinNetwork("net0");
    as.createHost("host1").joinNetwork("net0");
  }
  auto ebgp = std::make_shared<emu::Ebgp>();
  ebgp->addPrivatePeerings(100, {2}, {150, 151}, emu::PeerRelationship::kProvider);
  ebgp->addPrivatePeerings(101, {3}, {160, 161}, emu::PeerRelationship::kProvider);
  ebgp->addPrivatePeering(100, 2, 3, emu::PeerRelationship::kPeer);
  emulator.addLayer(base);
  emulator.addLayer(std::make_shared<emu::Routing>());
  emulator.addLayer(ebgp);
  return emulator;
}

std::vector<oracle::DnsServer> dnsServers(const emu::ManifestDocument& manifest) {
  std::vector<oracle::DnsServer> out;
  for (const auto& service : manifest.services) {
    oracle::DnsServer server;
    for (const auto& file : service.files) {
      static const std::string kDir = "/etc/zones/";
      if (file.nodePath.rfind(kDir, 0) != 0) continue;
      std::string zone = file.nodePath.substr(kDir.size());
      zone.erase(zone.size() - 4);  // "zone"
      server.zones[zone.empty() ? "." : zone] = file.content;
    }
    if (server.zones.empty() || service.attachments.empty()) continue;
    server.address = service.attachments.front().address.toString();
    out.push_back(std::move(server));
  }
  return out;
}

}  // namespace fixture

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "emu/analysis.h"
#include "emu/compile.h"
#include "emu/dns.h"
#include "emu/emulator.h"
#include "oracles.h"

namespace fixture {

/// Worm lab: 5 exchanges, 12 stub ASes with 20 hosts each, 5 transit ASes.
emu::Emulator morris(uint64_t seed = 1);
/// Source file of morris(), for the statement budget check.
std::filesystem::path morrisSource();

/// `ases` single-router ASes, `perIx` per exchange, full-mesh Unfiltered.
emu::Emulator scaling(int ases, int perIx, uint64_t seed = 1);

/// One AS with `routers` routers chained over internal networks, plus a stub
/// customer at an exchange.
emu::Emulator ibgpChain(int routers);

/// The transit example: AS2 with r0..r3 over net0..net2, on ix100..ix102.
emu::Emulator transitExample();

/// Small internet used by the DNS and portability tests: ASes 150, 151,
/// 152, 160, 161, 162, 171 behind transits 2 and 3. `shifted` puts an unused
/// network first in every stub so host addresses move to the second /24.
std::shared_ptr<emu::Base> smallBase(int hostsPerStub = 2, bool shifted = false);
void addSmallInternetRouting(emu::Emulator& emulator);

/// Root, com., edu. and example.com. zones with their servers, as a layer.
std::shared_ptr<emu::DomainNameService> exampleDns();
/// Bindings for every nameserver of exampleDns().
void bindExampleDns(emu::Emulator& emulator);

/// Six ASes: transit 2 and 3 peer; 150 and 151 buy from 2, 160 and 161
/// from 3. 151 is the victim, 161 the attacker.
emu::Emulator hijack();

/// Nameservers as the resolver oracle sees them: every node that carries
/// zone files, at its first interface address.
std::vector<oracle::DnsServer> dnsServers(const emu::ManifestDocument& manifest);

}  // namespace fixture

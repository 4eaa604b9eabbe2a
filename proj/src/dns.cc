#include "emu/dns.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "emu/base.h"
#include "emu/error.h"

namespace emu {
namespace {

std::vector<std::string_view> splitWhitespace(std::string_view text, size_t maxParts) {
  std::vector<std::string_view> parts;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == text.size()) break;
    if (parts.size() + 1 == maxParts) {
      size_t end = text.size();
      while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
      parts.push_back(text.substr(i, end - i));
      break;
    }
    size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    parts.push_back(text.substr(start, i - start));
  }
  return parts;
}

bool validLabel(std::string_view label, bool allowWildcard) {
  if (allowWildcard && label == "*") return true;
  if (label.empty() || label.size() > 63) return false;
  if (label.front() == '-' || label.back() == '-') return false;
  return std::all_of(label.begin(), label.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
  });
}

/// Relative or absolute domain name, or "@".
bool validName(std::string_view name, bool allowWildcard) {
  if (name == "@" || name == ".") return true;
  if (name.empty() || name.size() > 254) return false;
  if (name.back() == '.') name.remove_suffix(1);
  bool first = true;
  while (true) {
    size_t dot = name.find('.');
    if (!validLabel(name.substr(0, dot), allowWildcard && first)) return false;
    if (dot == std::string_view::npos) return true;
    name = name.substr(dot + 1);
    first = false;
  }
}

std::string upper(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

ParsedRecord parseRecord(std::string_view line) {
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::kUnparseableRecord, "'" + std::string(line) + "': " + why);
  };
  auto parts = splitWhitespace(line, 3);
  if (parts.size() != 3) throw fail("expected <owner> <type> <rdata>");
  ParsedRecord record{std::string(parts[0]), RecordType::kA, std::string(parts[2])};
  if (!validName(parts[0], true)) throw fail("bad owner name");
  const std::string type = upper(parts[1]);
  const std::string_view rdata = parts[2];
  if (type == "A") {
    record.type = RecordType::kA;
    if (!Ipv4Address::parse(rdata)) throw fail("A record needs an IPv4 address");
  } else if (type == "NS" || type == "CNAME") {
    record.type = type == "NS" ? RecordType::kNs : RecordType::kCname;
    if (rdata.find_first_of(" \t") != std::string_view::npos || !validName(rdata, false)) {
      throw fail(type + " record needs a domain name");
    }
  } else if (type == "MX") {
    record.type = RecordType::kMx;
    auto mx = splitWhitespace(rdata, 0);
    int preference = -1;
    if (mx.size() == 2) {
      auto [ptr, ec] = std::from_chars(mx[0].data(), mx[0].data() + mx[0].size(), preference);
      if (ec != std::errc() || ptr != mx[0].data() + mx[0].size()) preference = -1;
    }
    if (preference < 0 || preference > 65535 || !validName(mx[1], false)) {
      throw fail("MX record needs <preference> <exchange>");
    }
  } else if (type == "TXT") {
    record.type = RecordType::kTxt;
  } else {
    throw fail("unsupported record type " + std::string(parts[1]));
  }
  return record;
}

std::string canonicalFqdn(std::string_view fqdn) {
  if (fqdn == ".") return ".";
  if (fqdn.size() < 2 || fqdn.back() != '.' || fqdn.size() > 254) {
    throw Error(ErrorCode::kMalformedFqdn, "'" + std::string(fqdn) + "' must be dot-terminated");
  }
  std::string_view body = fqdn.substr(0, fqdn.size() - 1);
  while (true) {
    size_t dot = body.find('.');
    if (!validLabel(body.substr(0, dot), false)) {
      throw Error(ErrorCode::kMalformedFqdn, "'" + std::string(fqdn) + "' has an invalid label");
    }
    if (dot == std::string_view::npos) break;
    body = body.substr(dot + 1);
  }
  std::string out(fqdn);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string parentZone(std::string_view fqdn) {
  if (fqdn == ".") return "";
  size_t dot = fqdn.find('.');
  if (dot + 1 >= fqdn.size()) return ".";
  return std::string(fqdn.substr(dot + 1));
}

std::string zoneFilePath(std::string_view fqdn) {
  return "/etc/zones/" + std::string(fqdn) + "zone";
}

std::string nameserverName(std::string_view fqdn, size_t index) {
  std::string out = "ns" + std::to_string(index) + ".";
  if (fqdn != ".") out += fqdn;
  return out;
}

Zone& Zone::addRecord(std::string recordLine) {
  emu::checkMutable(*state_);
  parseRecord(recordLine);
  records_.push_back(std::move(recordLine));
  return *this;
}

// ---------------------------------------------------------------------------

DomainNameService::Nameserver& DomainNameService::Nameserver::addZone(std::string_view fqdn) {
  layer_->checkMutable();
  Zone& zone = layer_->getZone(fqdn);
  if (std::find(zones_.begin(), zones_.end(), zone.fqdn()) == zones_.end()) {
    zones_.push_back(zone.fqdn());
    zone.nameservers_.emplace_back(vnode_, false);
  }
  return *this;
}

DomainNameService::Nameserver& DomainNameService::Nameserver::setMaster() {
  if (zones_.empty()) throw Error(ErrorCode::kInvalidArgument, vnode_ + " serves no zone yet");
  return setMaster(zones_.back());
}

DomainNameService::Nameserver& DomainNameService::Nameserver::setMaster(std::string_view fqdn) {
  layer_->checkMutable();
  Zone& zone = layer_->zone(canonicalFqdn(fqdn));
  auto self = std::find_if(zone.nameservers_.begin(), zone.nameservers_.end(),
                           [&](const auto& entry) { return entry.first == vnode_; });
  if (self == zone.nameservers_.end()) {
    throw Error(ErrorCode::kInvalidArgument, vnode_ + " does not serve " + zone.fqdn());
  }
  for (const auto& [other, master] : zone.nameservers_) {
    if (master && other != vnode_) {
      throw Error(ErrorCode::kSecondMaster, zone.fqdn() + " already has master " + other);
    }
  }
  self->second = true;
  return *this;
}

DomainNameService::Nameserver& DomainNameService::install(std::string vnode) {
  checkMutable();
  if (vnode.empty()) throw Error(ErrorCode::kInvalidArgument, "empty virtual node name");
  auto it = nameservers_.find(vnode);
  if (it == nameservers_.end()) {
    auto server = std::unique_ptr<Nameserver>(new Nameserver(vnode, this));
    it = nameservers_.emplace(std::move(vnode), std::move(server)).first;
  }
  return *it->second;
}

Zone& DomainNameService::zone(std::string_view canonical) {
  auto it = zones_.find(canonical);
  if (it != zones_.end()) return *it->second;
  std::string parent = parentZone(canonical);
  if (!parent.empty()) zone(parent);
  auto created = std::unique_ptr<Zone>(new Zone(std::string(canonical), state()));
  return *zones_.emplace(std::string(canonical), std::move(created)).first->second;
}

Zone& DomainNameService::getZone(std::string_view fqdn) {
  const std::string canonical = canonicalFqdn(fqdn);
  if (zones_.find(canonical) == zones_.end()) checkMutable();
  return zone(canonical);
}

const Zone* DomainNameService::findZone(std::string_view fqdn) const {
  auto it = zones_.find(canonicalFqdn(fqdn));
  return it == zones_.end() ? nullptr : it->second.get();
}

std::vector<const Zone*> DomainNameService::zones() const {
  std::vector<const Zone*> out;
  for (const auto& [fqdn, zone] : zones_) out.push_back(zone.get());
  return out;
}

std::vector<const DomainNameService::Nameserver*> DomainNameService::nameservers() const {
  std::vector<const Nameserver*> out;
  for (const auto& [vnode, server] : nameservers_) out.push_back(server.get());
  return out;
}

std::vector<std::string> DomainNameService::virtualNodes() const {
  std::vector<std::string> out;
  for (const auto& [vnode, server] : nameservers_) out.push_back(vnode);
  return out;
}

std::vector<const Zone*> DomainNameService::children(const Zone& parent) const {
  std::vector<const Zone*> out;
  for (const auto& [fqdn, zone] : zones_) {
    if (parentZone(fqdn) == parent.fqdn()) out.push_back(zone.get());
  }
  return out;
}

Ipv4Address DomainNameService::requireAddress(std::string_view vnode, const AddressLookup& addressOf) const {
  auto address = addressOf(vnode);
  if (!address) throw Error(ErrorCode::kUnboundNameserver, std::string(vnode));
  return *address;
}

std::map<std::string, std::string> DomainNameService::zoneFiles(const AddressLookup& addressOf) const {
  for (const auto& [fqdn, zone] : zones_) {
    if (zone->nameservers().empty()) throw Error(ErrorCode::kOrphanZone, fqdn);
  }
  std::map<std::string, std::string> out;
  for (const auto& [fqdn, zone] : zones_) {
    std::ostringstream text;
    const std::string hostmaster = fqdn == "." ? "hostmaster." : "hostmaster." + fqdn;
    text << "$ORIGIN " << fqdn << "\n";
    text << "$TTL " << kZoneTtl << "\n";
    text << "@ IN SOA " << nameserverName(fqdn, 1) << " " << hostmaster << " " << kZoneSerial
         << " 900 900 1800 " << kZoneTtl << "\n";
    const auto& servers = zone->nameservers();
    for (size_t i = 0; i < servers.size(); ++i) {
      text << "@ IN NS " << nameserverName(fqdn, i + 1) << "\n";
    }
    for (size_t i = 0; i < servers.size(); ++i) {
      text << nameserverName(fqdn, i + 1) << " IN A " << requireAddress(servers[i].first, addressOf).toString()
           << "\n";
    }
    for (const Zone* child : children(*zone)) {
      const auto& childServers = child->nameservers();
      text << "; delegation " << child->fqdn() << "\n";
      for (size_t i = 0; i < childServers.size(); ++i) {
        text << child->fqdn() << " IN NS " << nameserverName(child->fqdn(), i + 1) << "\n";
      }
      for (size_t i = 0; i < childServers.size(); ++i) {
        text << nameserverName(child->fqdn(), i + 1) << " IN A "
             << requireAddress(childServers[i].first, addressOf).toString() << "\n";
      }
    }
    text << "; records\n";
    for (const auto& record : zone->records()) text << record << "\n";
    out.emplace(fqdn, text.str());
  }
  return out;
}

std::string DomainNameService::serverConfig(std::string_view vnode, const AddressLookup& addressOf) const {
  auto it = nameservers_.find(vnode);
  if (it == nameservers_.end()) throw Error(ErrorCode::kUnknownNode, "no nameserver " + std::string(vnode));
  std::vector<std::string> served = it->second->zones();
  std::sort(served.begin(), served.end());

  std::ostringstream conf;
  conf << "options {\n    directory \"/etc/zones\";\n    recursion no;\n    allow-query { any; };\n"
       << "    allow-transfer { any; };\n};\n";
  for (const auto& fqdn : served) {
    const Zone& zone = *zones_.find(fqdn)->second;
    std::optional<std::string> master;
    bool self = false;
    for (const auto& [server, isMaster] : zone.nameservers()) {
      if (isMaster) master = server;
      if (server == vnode) self = isMaster;
    }
    conf << "zone \"" << fqdn << "\" {\n";
    if (!master || self) {
      conf << "    type master;\n";
    } else {
      conf << "    type slave;\n    masters { " << requireAddress(*master, addressOf).toString() << "; };\n";
    }
    conf << "    file \"" << zoneFilePath(fqdn) << "\";\n};\n";
  }
  return conf.str();
}

void DomainNameService::render(RenderContext& ctx) {
  AddressLookup addressOf = [&ctx](std::string_view vnode) -> std::optional<Ipv4Address> {
    if (!ctx.isBound(vnode)) return std::nullopt;
    const Node& node = ctx.resolve(vnode);
    if (node.interfaces().empty()) return std::nullopt;
    return node.interfaces().front().address;
  };
  const auto files = zoneFiles(addressOf);
  for (const auto& [vnode, server] : nameservers_) {
    Node& node = ctx.resolve(vnode);
    std::vector<std::string> served = server->zones();
    std::sort(served.begin(), served.end());
    for (const auto& fqdn : served) node.setFile(files.at(fqdn), zoneFilePath(fqdn));
    node.setFile(serverConfig(vnode, addressOf), "/etc/bind/named.conf");
    node.addSoftware("bind9");
    node.appendStartCommand("named -c /etc/bind/named.conf");
  }
}

nlohmann::json DomainNameService::describeSpec() const {
  nlohmann::ordered_json zones = nlohmann::ordered_json::array();
  for (const auto& [fqdn, zone] : zones_) {
    nlohmann::ordered_json entry;
    entry["fqdn"] = fqdn;
    entry["records"] = zone->records();
    auto& servers = entry["nameservers"] = nlohmann::ordered_json::array();
    for (const auto& [vnode, master] : zone->nameservers()) {
      servers.push_back({{"vnode", vnode}, {"master", master}});
    }
    zones.push_back(std::move(entry));
  }
  nlohmann::ordered_json spec;
  spec["nameservers"] = virtualNodes();
  spec["zones"] = std::move(zones);
  return spec;
}

std::shared_ptr<DomainNameService> DomainNameService::fromDocument(const nlohmann::json& layerDocument) {
  auto layer = std::make_shared<DomainNameService>(layerDocument.at("name").get<std::string>());
  layer->restoreDependencies(layerDocument);
  const auto& spec = layerDocument.at("spec");
  for (const auto& vnode : spec.at("nameservers")) layer->install(vnode.get<std::string>());
  for (const auto& entry : spec.at("zones")) {
    const std::string fqdn = entry.at("fqdn").get<std::string>();
    Zone& zone = layer->getZone(fqdn);
    for (const auto& record : entry.at("records")) zone.addRecord(record.get<std::string>());
    for (const auto& server : entry.at("nameservers")) {
      auto& ns = layer->install(server.at("vnode").get<std::string>());
      ns.addZone(fqdn);
      if (server.at("master").get<bool>()) ns.setMaster(fqdn);
    }
  }
  return layer;
}

}  // namespace emu

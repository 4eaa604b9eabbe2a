#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emu/ipv4.h"
#include "emu/service.h"

namespace emu {

/// Resource record types accepted by Zone::addRecord.
enum class RecordType { kA, kNs, kCname, kMx, kTxt };

struct ParsedRecord {
  std::string owner;
  RecordType type;
  std::string rdata;
};

/// Parses "<owner> <type> <rdata>"; throws UnparseableRecord.
ParsedRecord parseRecord(std::string_view line);

/// Lower-cases and validates a dot-terminated name; throws MalformedFqdn.
std::string canonicalFqdn(std::string_view fqdn);
/// "" for the root zone.
std::string parentZone(std::string_view fqdn);
/// In-container path of a zone file: /etc/zones/<fqdn>zone.
std::string zoneFilePath(std::string_view fqdn);
/// Name of the i-th (1-based) nameserver of a zone: ns{i}.{fqdn}.
std::string nameserverName(std::string_view fqdn, size_t index);

inline constexpr int kZoneTtl = 300;
inline constexpr int kZoneSerial = 1;

class Zone {
 public:
  const std::string& fqdn() const { return fqdn_; }

  /// Appends a record line verbatim after validating it.
  Zone& addRecord(std::string recordLine);

  const std::vector<std::string>& records() const { return records_; }
  /// (vnode, master) in the order the nameservers were added.
  const std::vector<std::pair<std::string, bool>>& nameservers() const { return nameservers_; }

 private:
  friend class DomainNameService;
  Zone(std::string fqdn, std::shared_ptr<CompositionState> state) : fqdn_(std::move(fqdn)), state_(std::move(state)) {}

  std::string fqdn_;
  std::shared_ptr<CompositionState> state_;
  std::vector<std::string> records_;
  std::vector<std::pair<std::string, bool>> nameservers_;
};

class DomainNameService : public ServiceLayer {
 public:
  class Nameserver {
   public:
    const std::string& vnode() const { return vnode_; }
    const std::vector<std::string>& zones() const { return zones_; }

    Nameserver& addZone(std::string_view fqdn);
    /// Master for the zone added most recently.
    Nameserver& setMaster();
    Nameserver& setMaster(std::string_view fqdn);

   private:
    friend class DomainNameService;
    Nameserver(std::string vnode, DomainNameService* layer) : vnode_(std::move(vnode)), layer_(layer) {}

    std::string vnode_;
    DomainNameService* layer_;
    std::vector<std::string> zones_;
  };

  using AddressLookup = std::function<std::optional<Ipv4Address>(std::string_view vnode)>;

  explicit DomainNameService(std::string name = "DomainNameService") : ServiceLayer(std::move(name)) {}

  std::string typeName() const override { return "DomainNameService"; }

  /// Creates the nameserver if it does not exist yet.
  Nameserver& install(std::string vnode);
  /// Creates the zone (and any missing ancestors) if absent.
  Zone& getZone(std::string_view fqdn);
  const Zone* findZone(std::string_view fqdn) const;
  /// Zones ordered by fqdn.
  std::vector<const Zone*> zones() const;
  std::vector<const Nameserver*> nameservers() const;

  std::vector<std::string> virtualNodes() const override;

  /// fqdn -> zone file text. Every zone needs a nameserver (OrphanZone) and
  /// every nameserver an address (UnboundNameserver).
  std::map<std::string, std::string> zoneFiles(const AddressLookup& addressOf) const;
  /// named.conf for one nameserver.
  std::string serverConfig(std::string_view vnode, const AddressLookup& addressOf) const;

  void render(RenderContext& ctx) override;

  static std::shared_ptr<DomainNameService> fromDocument(const nlohmann::json& layerDocument);

 protected:
  nlohmann::json describeSpec() const override;

 private:
  Zone& zone(std::string_view canonical);
  std::vector<const Zone*> children(const Zone& parent) const;
  Ipv4Address requireAddress(std::string_view vnode, const AddressLookup& addressOf) const;

  std::map<std::string, std::unique_ptr<Zone>, std::less<>> zones_;
  std::map<std::string, std::unique_ptr<Nameserver>, std::less<>> nameservers_;
};

}  // namespace emu

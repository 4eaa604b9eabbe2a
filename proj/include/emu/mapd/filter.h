#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "emu/ipv4.h"

namespace emu::mapd {

/// What a scripted capture sees of a packet.
struct Packet {
  Ipv4Address src;
  Ipv4Address dst;
  /// "icmp", "tcp" or "udp".
  std::string protocol;
  int srcPort = 0;
  int dstPort = 0;
  int length = 64;

  /// tcpdump-style one-line summary.
  std::string summary() const;
};

/// The tcpdump expression subset understood offline:
///   icmp | tcp | udp | ip
///   [src|dst] host ADDR | [src|dst] net CIDR | [src|dst] port N
///   less N | greater N
///   not/!, and/&&, or/||, parentheses
/// Anything else is rejected with FilterRejected.
class CaptureFilter {
 public:
  static CaptureFilter parse(std::string_view expression);

  bool matches(const Packet& packet) const;
  const std::string& text() const { return text_; }

  struct Expr;

 private:
  std::string text_;
  std::shared_ptr<const Expr> root_;
};

}  // namespace emu::mapd

#include "emu/ipv4.h"

#include <charconv>

#include "emu/error.h"

namespace emu {
namespace {

std::optional<uint32_t> parseUint(std::string_view text, uint32_t max) {
  if (text.empty() || text.size() > 10) return std::nullopt;
  if (text.size() > 1 && text.front() == '0') return std::nullopt;
  uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value > max) return std::nullopt;
  return value;
}

}  // namespace

std::optional<Ipv4Address> Ipv4Address::parse(std::string_view text) {
  uint32_t value = 0;
  for (int i = 0; i < 4; ++i) {
    size_t dot = text.find('.');
    if ((i < 3) == (dot == std::string_view::npos)) return std::nullopt;
    auto octet = parseUint(text.substr(0, dot), 255);
    if (!octet) return std::nullopt;
    value = (value << 8) | *octet;
    text = i < 3 ? text.substr(dot + 1) : std::string_view{};
  }
  return Ipv4Address(value);
}

Ipv4Address Ipv4Address::fromString(std::string_view text) {
  auto parsed = parse(text);
  if (!parsed) throw Error(ErrorCode::kInvalidArgument, "bad IPv4 address '" + std::string(text) + "'");
  return *parsed;
}

std::string Ipv4Address::toString() const {
  return std::to_string(value_ >> 24) + "." + std::to_string((value_ >> 16) & 0xff) + "." +
         std::to_string((value_ >> 8) & 0xff) + "." + std::to_string(value_ & 0xff);
}

Ipv4Prefix::Ipv4Prefix(Ipv4Address address, int length) : length_(length) {
  if (length < 0 || length > 32) {
    throw Error(ErrorCode::kInvalidArgument, "prefix length out of range: " + std::to_string(length));
  }
  network_ = Ipv4Address(address.value() & mask());
}

uint32_t Ipv4Prefix::mask() const {
  return length_ == 0 ? 0u : ~uint32_t{0} << (32 - length_);
}

Ipv4Address Ipv4Prefix::broadcast() const {
  return Ipv4Address(network_.value() | ~mask());
}

std::optional<Ipv4Prefix> Ipv4Prefix::parse(std::string_view cidr) {
  size_t slash = cidr.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto address = Ipv4Address::parse(cidr.substr(0, slash));
  auto length = parseUint(cidr.substr(slash + 1), 32);
  if (!address || !length) return std::nullopt;
  return Ipv4Prefix(*address, static_cast<int>(*length));
}

Ipv4Prefix Ipv4Prefix::fromString(std::string_view cidr) {
  auto parsed = parse(cidr);
  if (!parsed) throw Error(ErrorCode::kInvalidArgument, "bad IPv4 prefix '" + std::string(cidr) + "'");
  return *parsed;
}

bool Ipv4Prefix::contains(Ipv4Address address) const {
  return (address.value() & mask()) == network_.value();
}

bool Ipv4Prefix::contains(const Ipv4Prefix& other) const {
  return other.length_ >= length_ && contains(other.network_);
}

bool Ipv4Prefix::overlaps(const Ipv4Prefix& other) const {
  return contains(other) || other.contains(*this);
}

std::string Ipv4Prefix::toString() const {
  return network_.toString() + "/" + std::to_string(length_);
}

}  // namespace emu

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace emu {

class Ipv4Address {
 public:
  constexpr Ipv4Address() = default;
  constexpr explicit Ipv4Address(uint32_t value) : value_(value) {}

  /// Parses dotted-quad text; returns nullopt on anything else.
  static std::optional<Ipv4Address> parse(std::string_view text);
  /// Like parse() but throws Error(kInvalidArgument).
  static Ipv4Address fromString(std::string_view text);

  constexpr uint32_t value() const { return value_; }
  std::string toString() const;

  friend constexpr auto operator<=>(Ipv4Address, Ipv4Address) = default;

 private:
  uint32_t value_ = 0;
};

class Ipv4Prefix {
 public:
  constexpr Ipv4Prefix() = default;
  /// Host bits of `address` are cleared.
  Ipv4Prefix(Ipv4Address address, int length);

  static std::optional<Ipv4Prefix> parse(std::string_view cidr);
  static Ipv4Prefix fromString(std::string_view cidr);

  Ipv4Address network() const { return network_; }
  int length() const { return length_; }
  uint32_t mask() const;
  Ipv4Address broadcast() const;
  uint64_t size() const { return uint64_t{1} << (32 - length_); }

  bool contains(Ipv4Address address) const;
  bool contains(const Ipv4Prefix& other) const;
  bool overlaps(const Ipv4Prefix& other) const;
  /// network() + offset; no bounds check.
  Ipv4Address at(uint32_t offset) const { return Ipv4Address(network_.value() + offset); }

  std::string toString() const;

  friend auto operator<=>(const Ipv4Prefix&, const Ipv4Prefix&) = default;

 private:
  Ipv4Address network_;
  int length_ = 0;
};

}  // namespace emu

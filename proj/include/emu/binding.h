#pragma once

#include <optional>
#include <string>

#include "emu/ipv4.h"

namespace emu {

class Node;

/// How a binding picks among matching candidates.
///   kFirst  - lowest ASN, then lexicographically smallest node name
///   kRandom - uniform pick driven by the emulator seed
///   kNew    - create a fresh host in the filter's AS
enum class Action { kFirst, kRandom, kNew };

std::string_view actionName(Action action);
std::optional<Action> parseAction(std::string_view text);

/// Selects candidate host nodes. Unset criteria match everything.
struct Filter {
  std::optional<int> asn;
  /// Anchored glob (fnmatch syntax) over the node name.
  std::optional<std::string> nodeName;
  std::optional<Ipv4Address> ip;
  bool allowReuse = false;

  bool matches(const Node& node) const;
};

struct Binding {
  std::string vnode;
  Filter filter;
  Action action = Action::kFirst;
};

}  // namespace emu

#include "emu/binding.h"

#include <fnmatch.h>

#include <cctype>
#include <string>

#include "emu/base.h"

namespace emu {

std::string_view actionName(Action action) {
  switch (action) {
    case Action::kFirst: return "FIRST";
    case Action::kRandom: return "RANDOM";
    case Action::kNew: return "NEW";
  }
  return "FIRST";
}

std::optional<Action> parseAction(std::string_view text) {
  std::string upper(text);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "FIRST") return Action::kFirst;
  if (upper == "RANDOM") return Action::kRandom;
  if (upper == "NEW") return Action::kNew;
  return std::nullopt;
}

bool Filter::matches(const Node& node) const {
  if (asn && node.asn() != *asn) return false;
  if (nodeName && fnmatch(nodeName->c_str(), node.name().c_str(), 0) != 0) return false;
  if (ip) {
    bool found = false;
    for (const auto& iface : node.interfaces()) found = found || iface.address == *ip;
    if (!found) return false;
  }
  return true;
}

}  // namespace emu

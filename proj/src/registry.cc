#include "emu/registry.h"

#include "emu/error.h"

namespace emu {

void Registry::add(RegistryKey key, const Registrable* object) {
  if (frozen_) throw Error(ErrorCode::kAlreadyRendered, "registry is frozen");
  auto [it, inserted] = entries_.emplace(std::move(key), object);
  if (!inserted) throw Error(ErrorCode::kDuplicateKey, it->first.toString());
}

const Registrable* Registry::find(const RegistryKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : it->second;
}

size_t Registry::count(std::string_view kind) const {
  size_t n = 0;
  for (const auto& [key, object] : entries_) {
    if (key.kind == kind) ++n;
  }
  return n;
}

std::vector<RegistryKey> Registry::keys() const {
  std::vector<RegistryKey> out;
  out.reserve(entries_.size());
  for (const auto& [key, object] : entries_) out.push_back(key);
  return out;
}

std::string Registry::serialize() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& [key, object] : entries_) {
    nlohmann::ordered_json entry;
    entry["scope"] = key.scope;
    entry["kind"] = key.kind;
    entry["name"] = key.name;
    entry["object"] = object->toJson();
    doc.push_back(std::move(entry));
  }
  return doc.dump(1);
}

}  // namespace emu

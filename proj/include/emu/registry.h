#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace emu {

/// Anything stored in the registry can describe itself for serialization.
class Registrable {
 public:
  virtual ~Registrable() = default;
  virtual nlohmann::json toJson() const = 0;
};

struct RegistryKey {
  std::string scope;  // decimal ASN, "ix" or "global"
  std::string kind;
  std::string name;

  std::string toString() const { return scope + "/" + kind + "/" + name; }
  friend auto operator<=>(const RegistryKey&, const RegistryKey&) = default;
};

/// Scoped store of every emulation object. Holds non-owning pointers; the
/// objects are owned by the layers that created them.
class Registry {
 public:
  void add(RegistryKey key, const Registrable* object);

  const Registrable* find(const RegistryKey& key) const;
  bool contains(const RegistryKey& key) const { return find(key) != nullptr; }

  template <typename T>
  const T* get(const RegistryKey& key) const {
    return dynamic_cast<const T*>(find(key));
  }

  size_t size() const { return entries_.size(); }
  size_t count(std::string_view kind) const;
  std::vector<RegistryKey> keys() const;

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  /// Canonical JSON text, keys in sorted order.
  std::string serialize() const;

 private:
  std::map<RegistryKey, const Registrable*> entries_;
  bool frozen_ = false;
};

}  // namespace emu

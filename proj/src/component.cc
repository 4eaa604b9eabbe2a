#include "emu/component.h"

#include <map>
#include <mutex>

#include "emu/dns.h"
#include "emu/service.h"

namespace emu {
namespace {

struct FactoryTable {
  std::mutex mutex;
  std::map<std::string, LayerFactory, std::less<>> factories;

  FactoryTable() {
    factories.emplace("DomainNameService", [](const nlohmann::json& doc) -> std::shared_ptr<Layer> {
      return DomainNameService::fromDocument(doc);
    });
    factories.emplace("GenericService", [](const nlohmann::json& doc) -> std::shared_ptr<Layer> {
      return GenericService::fromDocument(doc);
    });
  }
};

FactoryTable& table() {
  static FactoryTable instance;
  return instance;
}

}  // namespace

void registerComponentType(std::string typeName, LayerFactory factory) {
  auto& t = table();
  std::lock_guard lock(t.mutex);
  t.factories.insert_or_assign(std::move(typeName), std::move(factory));
}

const LayerFactory* findComponentType(std::string_view typeName) {
  auto& t = table();
  std::lock_guard lock(t.mutex);
  auto it = t.factories.find(typeName);
  return it == t.factories.end() ? nullptr : &it->second;
}

}  // namespace emu

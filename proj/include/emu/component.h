#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

#include "emu/layer.h"

namespace emu {

/// Builds a layer from one entry of a component document's "layers" array.
using LayerFactory = std::function<std::shared_ptr<Layer>(const nlohmann::json& layerDocument)>;

/// Makes a service-layer type importable. Built-in types (DomainNameService,
/// GenericService) are always known.
void registerComponentType(std::string typeName, LayerFactory factory);
const LayerFactory* findComponentType(std::string_view typeName);

}  // namespace emu

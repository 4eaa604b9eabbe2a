#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "emu/emulator.h"

namespace emu {

/// Builds an emulator from a JSON scenario document. Relative component
/// paths resolve against `baseDir`. `seed` overrides the document's seed.
Emulator buildScenario(const nlohmann::json& document, const std::filesystem::path& baseDir,
                       std::optional<uint64_t> seed = std::nullopt);

/// Reads and builds a scenario file (IoError, InvalidArgument on bad JSON).
Emulator loadScenario(const std::filesystem::path& file, std::optional<uint64_t> seed = std::nullopt);

}  // namespace emu

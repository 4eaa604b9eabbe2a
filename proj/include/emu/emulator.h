#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "emu/base.h"
#include "emu/binding.h"
#include "emu/layer.h"
#include "emu/registry.h"
#include "emu/routing_state.h"

namespace emu {

inline constexpr int kComponentVersion = 1;

struct RenderState;

/// Immutable result of Emulator::render(). Cheap to copy; safe to share
/// across threads. A default-constructed instance is "not rendered" and
/// every accessor except valid() throws NotRendered.
class RenderedEmulation {
 public:
  RenderedEmulation() = default;

  bool valid() const { return state_ != nullptr; }

  uint64_t seed() const;
  const Registry& registry() const;
  const Base& base() const;
  const RoutingState& routing() const;
  /// Layers in render order.
  std::vector<const Layer*> layers() const;
  const Layer* findLayer(std::string_view name) const;

  /// Every node: AS nodes by (asn, name), then route servers.
  std::vector<const Node*> nodes() const;
  std::vector<const Network*> networks() const;
  const Node* findNode(std::string_view key) const;
  const Node& node(std::string_view key) const;

  /// vnode -> Node::key() of the physical node it was bound to.
  const std::map<std::string, std::string>& bindings() const;
  const Node& boundNode(std::string_view vnode) const;

  std::string serializeRegistry() const;

 private:
  friend class Emulator;
  explicit RenderedEmulation(std::shared_ptr<const RenderState> state) : state_(std::move(state)) {}
  const RenderState& state() const;

  std::shared_ptr<const RenderState> state_;
};

class Emulator {
 public:
  explicit Emulator(uint64_t seed = 0) : seed_(seed) {}

  template <typename T>
  T& addLayer(std::shared_ptr<T> layer) {
    addLayerImpl(layer);
    return *layer;
  }

  bool hasLayer(std::string_view name) const;
  Layer& getLayer(std::string_view name);
  std::vector<const Layer*> layers() const;

  Emulator& addBinding(Binding binding);
  const std::vector<Binding>& bindings() const { return bindings_; }

  /// Orders layers, configures them, binds virtual nodes, renders, and
  /// freezes everything. Callable once.
  RenderedEmulation render();
  bool rendered() const { return rendered_ != nullptr; }
  /// The result of the successful render(); throws NotRendered before that.
  const RenderedEmulation& renderedEmulation() const;

  uint64_t seed() const { return seed_; }

  /// Serializes the named service layers as a component document.
  nlohmann::json componentDocument(const std::set<std::string>& layerNames) const;
  void exportComponent(const std::set<std::string>& layerNames, const std::filesystem::path& path) const;

  static std::vector<std::shared_ptr<Layer>> parseComponent(const nlohmann::json& document);
  static std::vector<std::shared_ptr<Layer>> importComponent(const std::filesystem::path& path);

 private:
  void addLayerImpl(std::shared_ptr<Layer> layer);
  std::vector<std::shared_ptr<Layer>> orderLayers() const;
  void resolveBindings(RenderContext& ctx, Base& base);

  uint64_t seed_;
  std::vector<std::shared_ptr<Layer>> layers_;
  std::vector<Binding> bindings_;
  std::unique_ptr<RenderedEmulation> rendered_;
  bool failed_ = false;
};

}  // namespace emu

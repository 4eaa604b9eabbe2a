#pragma once

#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace emu {

class Base;
class Node;
class Registry;
struct RoutingState;

/// Shared by a layer and every object it hands out; flipped once render()
/// completes so that builder calls on any of them fail.
struct CompositionState {
  bool frozen = false;
};

void checkMutable(const CompositionState& state);

/// Implicit render order: base < routing < ebgp < services.
enum class LayerKind { kBase = 0, kRouting = 1, kEbgp = 2, kService = 3 };

std::string_view layerKindName(LayerKind kind);

/// Everything a layer may touch while the emulator renders.
class RenderContext {
 public:
  RenderContext(Base& base, Registry& registry, RoutingState& routing, uint64_t seed);

  Base& base() const { return *base_; }
  Registry& registry() const { return *registry_; }
  RoutingState& routing() const { return *routing_; }
  uint64_t seed() const { return seed_; }
  std::mt19937_64& rng() { return rng_; }

  /// The physical node a virtual node was bound to. Only valid once the
  /// binding phase has run (i.e. inside Layer::render).
  Node& resolve(std::string_view vnode) const;
  bool isBound(std::string_view vnode) const;
  void bind(std::string vnode, Node& node);
  /// vnode -> bound node, in vnode order.
  const std::map<std::string, Node*, std::less<>>& bound() const { return bound_; }

 private:
  Base* base_;
  Registry* registry_;
  RoutingState* routing_;
  uint64_t seed_;
  std::mt19937_64 rng_;
  std::map<std::string, Node*, std::less<>> bound_;
};

class Layer {
 public:
  Layer(std::string name, LayerKind kind);
  virtual ~Layer() = default;

  Layer(const Layer&) = delete;
  Layer& operator=(const Layer&) = delete;

  const std::string& name() const { return name_; }
  LayerKind kind() const { return kind_; }

  /// Adds an explicit ordering edge: this layer renders after `layerName`.
  Layer& dependsOn(std::string layerName);
  const std::set<std::string>& dependencies() const { return dependencies_; }

  bool frozen() const { return state_->frozen; }

  /// Stable type tag used in component documents.
  virtual std::string typeName() const = 0;

  /// First pass, in dependency order: register objects, validate.
  virtual void configure(RenderContext& /*ctx*/) {}
  /// Second pass, after virtual nodes are bound.
  virtual void render(RenderContext& /*ctx*/) {}

  /// Virtual node names this layer needs bound (service layers only).
  virtual std::vector<std::string> virtualNodes() const { return {}; }

  /// Component-document description. Only service layers are exportable.
  virtual nlohmann::json describe() const;

 protected:
  void checkMutable() const { emu::checkMutable(*state_); }
  const std::shared_ptr<CompositionState>& state() const { return state_; }

 private:
  friend class Emulator;

  std::string name_;
  LayerKind kind_;
  std::set<std::string> dependencies_;
  std::shared_ptr<CompositionState> state_ = std::make_shared<CompositionState>();
};

}  // namespace emu

#include "emu/layer.h"

#include "emu/base.h"
#include "emu/error.h"

namespace emu {

void checkMutable(const CompositionState& state) {
  if (state.frozen) throw Error(ErrorCode::kAlreadyRendered, "emulation is already rendered");
}

std::string_view layerKindName(LayerKind kind) {
  switch (kind) {
    case LayerKind::kBase: return "base";
    case LayerKind::kRouting: return "routing";
    case LayerKind::kEbgp: return "ebgp";
    case LayerKind::kService: return "service";
  }
  return "unknown";
}

RenderContext::RenderContext(Base& base, Registry& registry, RoutingState& routing, uint64_t seed)
    : base_(&base), registry_(&registry), routing_(&routing), seed_(seed), rng_(seed) {}

Node& RenderContext::resolve(std::string_view vnode) const {
  auto it = bound_.find(vnode);
  if (it == bound_.end()) {
    throw Error(ErrorCode::kUnboundVirtualNode, std::string(vnode));
  }
  return *it->second;
}

bool RenderContext::isBound(std::string_view vnode) const {
  return bound_.find(vnode) != bound_.end();
}

void RenderContext::bind(std::string vnode, Node& node) {
  bound_.insert_or_assign(std::move(vnode), &node);
}

Layer::Layer(std::string name, LayerKind kind) : name_(std::move(name)), kind_(kind) {
  if (name_.empty()) throw Error(ErrorCode::kInvalidArgument, "layer name must not be empty");
}

Layer& Layer::dependsOn(std::string layerName) {
  checkMutable();
  dependencies_.insert(std::move(layerName));
  return *this;
}

nlohmann::json Layer::describe() const {
  throw Error(ErrorCode::kNotExportable,
              "layer '" + name_ + "' is a " + std::string(layerKindName(kind_)) + " layer");
}

}  // namespace emu

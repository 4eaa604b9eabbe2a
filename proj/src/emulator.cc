#include "emu/emulator.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "emu/component.h"
#include "emu/error.h"

namespace emu {

struct RenderState {
  uint64_t seed = 0;
  std::vector<std::shared_ptr<Layer>> layers;
  std::shared_ptr<Base> fallbackBase;
  const Base* base = nullptr;
  Registry registry;
  RoutingState routing;
  std::map<std::string, std::string> bindings;
};

namespace {

std::string describeFilter(const Filter& filter) {
  std::string out;
  if (filter.asn) out += "asn=" + std::to_string(*filter.asn) + " ";
  if (filter.nodeName) out += "nodeName=" + *filter.nodeName + " ";
  if (filter.ip) out += "ip=" + filter.ip->toString() + " ";
  if (out.empty()) return "(match all)";
  out.pop_back();
  return out;
}

std::string sanitizeNodeName(std::string_view vnode) {
  std::string out;
  for (char c : vnode) out.push_back(isValidIdentifier(std::string_view(&c, 1)) ? c : '_');
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// RenderedEmulation

const RenderState& RenderedEmulation::state() const {
  if (!state_) throw Error(ErrorCode::kNotRendered, "emulation has not been rendered");
  return *state_;
}

uint64_t RenderedEmulation::seed() const { return state().seed; }
const Registry& RenderedEmulation::registry() const { return state().registry; }
const Base& RenderedEmulation::base() const { return *state().base; }
const RoutingState& RenderedEmulation::routing() const { return state().routing; }

std::vector<const Layer*> RenderedEmulation::layers() const {
  std::vector<const Layer*> out;
  for (const auto& layer : state().layers) out.push_back(layer.get());
  return out;
}

const Layer* RenderedEmulation::findLayer(std::string_view name) const {
  for (const auto& layer : state().layers) {
    if (layer->name() == name) return layer.get();
  }
  return nullptr;
}

std::vector<const Node*> RenderedEmulation::nodes() const { return base().nodes(); }
std::vector<const Network*> RenderedEmulation::networks() const { return base().networks(); }

const Node* RenderedEmulation::findNode(std::string_view key) const { return base().findNodeByKey(key); }

const Node& RenderedEmulation::node(std::string_view key) const {
  if (const Node* found = findNode(key)) return *found;
  throw Error(ErrorCode::kUnknownNode, std::string(key));
}

const std::map<std::string, std::string>& RenderedEmulation::bindings() const { return state().bindings; }

const Node& RenderedEmulation::boundNode(std::string_view vnode) const {
  const auto& bindings = state().bindings;
  auto it = bindings.find(std::string(vnode));
  if (it == bindings.end()) throw Error(ErrorCode::kUnboundVirtualNode, std::string(vnode));
  return node(it->second);
}

std::string RenderedEmulation::serializeRegistry() const { return state().registry.serialize(); }

// ---------------------------------------------------------------------------
// Emulator

void Emulator::addLayerImpl(std::shared_ptr<Layer> layer) {
  if (rendered() || failed_) throw Error(ErrorCode::kAlreadyRendered, "cannot add layers after render");
  if (!layer) throw Error(ErrorCode::kInvalidArgument, "null layer");
  if (hasLayer(layer->name())) throw Error(ErrorCode::kDuplicateLayer, layer->name());
  if (layer->kind() == LayerKind::kBase) {
    for (const auto& existing : layers_) {
      if (existing->kind() == LayerKind::kBase) {
        throw Error(ErrorCode::kInvalidArgument, "an emulator holds a single base layer");
      }
    }
    if (dynamic_cast<Base*>(layer.get()) == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "base-kind layers must derive from Base");
    }
  }
  layers_.push_back(std::move(layer));
}

bool Emulator::hasLayer(std::string_view name) const {
  return std::any_of(layers_.begin(), layers_.end(), [&](const auto& l) { return l->name() == name; });
}

Layer& Emulator::getLayer(std::string_view name) {
  for (auto& layer : layers_) {
    if (layer->name() == name) return *layer;
  }
  throw Error(ErrorCode::kUnknownLayer, std::string(name));
}

std::vector<const Layer*> Emulator::layers() const {
  std::vector<const Layer*> out;
  for (const auto& layer : layers_) out.push_back(layer.get());
  return out;
}

Emulator& Emulator::addBinding(Binding binding) {
  if (rendered() || failed_) throw Error(ErrorCode::kAlreadyRendered, "cannot add bindings after render");
  if (binding.vnode.empty()) throw Error(ErrorCode::kInvalidArgument, "binding needs a virtual node name");
  for (const auto& existing : bindings_) {
    if (existing.vnode == binding.vnode) throw Error(ErrorCode::kDuplicateBinding, binding.vnode);
  }
  bindings_.push_back(std::move(binding));
  return *this;
}

const RenderedEmulation& Emulator::renderedEmulation() const {
  if (!rendered_) throw Error(ErrorCode::kNotRendered, "emulation has not been rendered");
  return *rendered_;
}

std::vector<std::shared_ptr<Layer>> Emulator::orderLayers() const {
  const size_t n = layers_.size();
  std::map<std::string, size_t, std::less<>> index;
  for (size_t i = 0; i < n; ++i) index.emplace(layers_[i]->name(), i);

  std::vector<std::set<size_t>> successors(n);
  std::vector<size_t> indegree(n, 0);
  auto addEdge = [&](size_t from, size_t to) {
    if (successors[from].insert(to).second) ++indegree[to];
  };
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      if (layers_[a]->kind() < layers_[b]->kind()) addEdge(a, b);
    }
    for (const auto& dependency : layers_[a]->dependencies()) {
      auto it = index.find(dependency);
      if (it == index.end()) {
        throw Error(ErrorCode::kUnknownLayer,
                    "layer '" + layers_[a]->name() + "' depends on unknown layer '" + dependency + "'");
      }
      if (it->second == a) {
        throw Error(ErrorCode::kCyclicLayerDependency, "layer '" + dependency + "' depends on itself");
      }
      addEdge(it->second, a);
    }
  }

  // Kahn's algorithm; among ready layers pick (kind, insertion order).
  std::vector<std::shared_ptr<Layer>> order;
  std::vector<bool> done(n, false);
  while (order.size() < n) {
    std::optional<size_t> pick;
    for (size_t i = 0; i < n; ++i) {
      if (done[i] || indegree[i] != 0) continue;
      if (!pick || layers_[i]->kind() < layers_[*pick]->kind()) pick = i;
    }
    if (!pick) {
      std::string names;
      for (size_t i = 0; i < n; ++i) {
        if (!done[i]) names += (names.empty() ? "" : ", ") + layers_[i]->name();
      }
      throw Error(ErrorCode::kCyclicLayerDependency, "cycle among layers: " + names);
    }
    done[*pick] = true;
    order.push_back(layers_[*pick]);
    for (size_t next : successors[*pick]) --indegree[next];
  }
  return order;
}

void Emulator::resolveBindings(RenderContext& ctx, Base& base) {
  std::set<std::string> referenced;
  for (const auto& layer : layers_) {
    for (auto& vnode : layer->virtualNodes()) referenced.insert(std::move(vnode));
  }
  for (const auto& vnode : referenced) {
    bool found = std::any_of(bindings_.begin(), bindings_.end(), [&](const Binding& b) { return b.vnode == vnode; });
    if (!found) throw Error(ErrorCode::kUnboundVirtualNode, vnode);
  }

  // node key -> whether every binding that claimed it allowed reuse
  std::map<std::string, bool> claimed;

  for (const Binding& binding : bindings_) {
    if (!referenced.contains(binding.vnode)) continue;
    const Filter& filter = binding.filter;

    if (binding.action == Action::kNew) {
      AutonomousSystem* as = filter.asn ? base.findAutonomousSystem(*filter.asn) : nullptr;
      if (as == nullptr || as->networks().empty()) {
        throw Error(ErrorCode::kNoMatchingCandidate,
                    binding.vnode + ": action NEW needs an existing AS with a network (" + describeFilter(filter) + ")");
      }
      std::string name = sanitizeNodeName(binding.vnode);
      for (int suffix = 1; as->hasNode(name); ++suffix) {
        name = sanitizeNodeName(binding.vnode) + "-" + std::to_string(suffix);
      }
      Node& host = as->createHost(name);
      host.joinNetwork(as->networks().front()->name());
      ctx.registry().add({host.scope(), "node", host.name()}, &host);
      claimed[host.key()] = false;
      ctx.bind(binding.vnode, host);
      continue;
    }

    std::vector<Node*> matches;
    for (AutonomousSystem* as : base.autonomousSystems()) {
      for (Node* node : as->nodes()) {
        if (node->isHost() && filter.matches(*node)) matches.push_back(node);
      }
    }
    if (matches.empty()) {
      throw Error(ErrorCode::kNoMatchingCandidate, binding.vnode + " (" + describeFilter(filter) + ")");
    }
    std::vector<Node*> available;
    for (Node* node : matches) {
      auto it = claimed.find(node->key());
      if (it == claimed.end() || (filter.allowReuse && it->second)) available.push_back(node);
    }
    if (available.empty()) {
      throw Error(ErrorCode::kBindCollision,
                  binding.vnode + ": every candidate is already bound (" + describeFilter(filter) + ")");
    }
    Node* chosen = available.front();
    if (binding.action == Action::kRandom) chosen = available[ctx.rng()() % available.size()];
    auto it = claimed.find(chosen->key());
    claimed[chosen->key()] = filter.allowReuse && (it == claimed.end() || it->second);
    ctx.bind(binding.vnode, *chosen);
  }
}

RenderedEmulation Emulator::render() {
  if (rendered()) throw Error(ErrorCode::kAlreadyRendered, "render() may only be called once");
  if (failed_) throw Error(ErrorCode::kAlreadyRendered, "a previous render() failed; build a new emulator");
  failed_ = true;

  auto order = orderLayers();
  auto state = std::make_shared<RenderState>();
  state->seed = seed_;

  Base* base = nullptr;
  for (const auto& layer : order) {
    if (layer->kind() == LayerKind::kBase) base = static_cast<Base*>(layer.get());
  }
  if (base == nullptr) {
    state->fallbackBase = std::make_shared<Base>();
    base = state->fallbackBase.get();
  }
  state->base = base;

  RenderContext ctx(*base, state->registry, state->routing, seed_);
  for (const auto& layer : order) layer->configure(ctx);
  resolveBindings(ctx, *base);
  for (const auto& layer : order) layer->render(ctx);

  for (const auto& layer : order) layer->state_->frozen = true;
  if (state->fallbackBase) state->fallbackBase->state_->frozen = true;
  state->registry.freeze();
  for (const auto& [vnode, node] : ctx.bound()) state->bindings.emplace(vnode, node->key());
  state->layers = std::move(order);

  rendered_ = std::make_unique<RenderedEmulation>(RenderedEmulation(std::move(state)));
  failed_ = false;
  return *rendered_;
}

// ---------------------------------------------------------------------------
// Components

nlohmann::json Emulator::componentDocument(const std::set<std::string>& layerNames) const {
  nlohmann::ordered_json doc;
  doc["componentVersion"] = kComponentVersion;
  auto& layers = doc["layers"] = nlohmann::ordered_json::array();
  std::set<std::string> vnodes;
  for (const auto& name : layerNames) {
    const Layer* layer = nullptr;
    for (const auto& candidate : layers_) {
      if (candidate->name() == name) layer = candidate.get();
    }
    if (layer == nullptr) throw Error(ErrorCode::kUnknownLayer, name);
    layers.push_back(nlohmann::ordered_json(layer->describe()));
    for (auto& vnode : layer->virtualNodes()) vnodes.insert(std::move(vnode));
  }
  doc["virtualNodes"] = vnodes;
  return doc;
}

void Emulator::exportComponent(const std::set<std::string>& layerNames, const std::filesystem::path& path) const {
  const std::string text = componentDocument(layerNames).dump(2) + "\n";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

std::vector<std::shared_ptr<Layer>> Emulator::parseComponent(const nlohmann::json& document) {
  if (!document.is_object() || !document.contains("componentVersion")) {
    throw Error(ErrorCode::kMalformedComponent, "missing componentVersion");
  }
  const auto& version = document.at("componentVersion");
  if (!version.is_number_integer()) throw Error(ErrorCode::kMalformedComponent, "componentVersion must be an integer");
  if (version.get<int>() != kComponentVersion) {
    throw Error(ErrorCode::kVersionMismatch, "componentVersion " + version.dump() + " (supported: " +
                                                 std::to_string(kComponentVersion) + ")");
  }
  if (!document.contains("layers") || !document.at("layers").is_array()) {
    throw Error(ErrorCode::kMalformedComponent, "missing layers array");
  }
  std::vector<std::shared_ptr<Layer>> out;
  try {
    for (const auto& entry : document.at("layers")) {
      const std::string type = entry.at("type").get<std::string>();
      const LayerFactory* factory = findComponentType(type);
      if (factory == nullptr) throw Error(ErrorCode::kMalformedComponent, "unknown layer type '" + type + "'");
      out.push_back((*factory)(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedComponent, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedComponent) throw;
    throw Error(ErrorCode::kMalformedComponent, e.what());
  }
  return out;
}

std::vector<std::shared_ptr<Layer>> Emulator::importComponent(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json doc = nlohmann::json::parse(buffer.str(), nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::kMalformedComponent, path.string() + " is not valid JSON");
  return parseComponent(doc);
}

}  // namespace emu

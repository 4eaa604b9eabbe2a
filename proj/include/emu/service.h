#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "emu/layer.h"

namespace emu {

/// Base for layers that only talk about virtual nodes. Export produces
/// {"type", "name", "dependsOn", "spec"}; subclasses supply the spec.
class ServiceLayer : public Layer {
 public:
  explicit ServiceLayer(std::string name) : Layer(std::move(name), LayerKind::kService) {}

  nlohmann::json describe() const final;

 protected:
  virtual nlohmann::json describeSpec() const = 0;
  /// Restores dependsOn from a layer document.
  void restoreDependencies(const nlohmann::json& layerDocument);
};

/// Installs software, files and commands onto virtual nodes. The extension
/// point for services that are plain package + config drops.
class GenericService : public ServiceLayer {
 public:
  class Server {
   public:
    const std::string& vnode() const { return vnode_; }
    Server& addSoftware(std::string package);
    Server& setFile(std::string content, std::string nodePath);
    Server& addBuildCommand(std::string command);
    Server& appendStartCommand(std::string command);

   private:
    friend class GenericService;
    Server(std::string vnode, std::shared_ptr<CompositionState> state)
        : vnode_(std::move(vnode)), state_(std::move(state)) {}

    std::string vnode_;
    std::shared_ptr<CompositionState> state_;
    std::vector<std::string> software_;
    std::vector<std::pair<std::string, std::string>> files_;  // (nodePath, content)
    std::vector<std::string> buildCommands_;
    std::vector<std::string> startCommands_;
  };

  explicit GenericService(std::string name = "GenericService") : ServiceLayer(std::move(name)) {}

  std::string typeName() const override { return "GenericService"; }

  /// Returns the existing server if `vnode` was already installed.
  Server& install(std::string vnode);

  std::vector<std::string> virtualNodes() const override;
  void render(RenderContext& ctx) override;

  static std::shared_ptr<GenericService> fromDocument(const nlohmann::json& layerDocument);

 protected:
  nlohmann::json describeSpec() const override;

 private:
  std::map<std::string, std::unique_ptr<Server>> servers_;
};

}  // namespace emu

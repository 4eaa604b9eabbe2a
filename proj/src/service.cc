#include "emu/service.h"

#include "emu/base.h"
#include "emu/error.h"

namespace emu {

nlohmann::json ServiceLayer::describe() const {
  nlohmann::ordered_json out;
  out["type"] = typeName();
  out["name"] = name();
  out["dependsOn"] = dependencies();
  out["spec"] = describeSpec();
  return out;
}

void ServiceLayer::restoreDependencies(const nlohmann::json& layerDocument) {
  if (!layerDocument.contains("dependsOn")) return;
  for (const auto& dependency : layerDocument.at("dependsOn")) dependsOn(dependency.get<std::string>());
}

GenericService::Server& GenericService::Server::addSoftware(std::string package) {
  emu::checkMutable(*state_);
  software_.push_back(std::move(package));
  return *this;
}

GenericService::Server& GenericService::Server::setFile(std::string content, std::string nodePath) {
  emu::checkMutable(*state_);
  if (nodePath.empty() || nodePath.front() != '/') {
    throw Error(ErrorCode::kRelativePath, "node path must be absolute: '" + nodePath + "'");
  }
  files_.emplace_back(std::move(nodePath), std::move(content));
  return *this;
}

GenericService::Server& GenericService::Server::addBuildCommand(std::string command) {
  emu::checkMutable(*state_);
  buildCommands_.push_back(std::move(command));
  return *this;
}

GenericService::Server& GenericService::Server::appendStartCommand(std::string command) {
  emu::checkMutable(*state_);
  startCommands_.push_back(std::move(command));
  return *this;
}

GenericService::Server& GenericService::install(std::string vnode) {
  checkMutable();
  if (vnode.empty()) throw Error(ErrorCode::kInvalidArgument, "empty virtual node name");
  auto it = servers_.find(vnode);
  if (it == servers_.end()) {
    auto server = std::unique_ptr<Server>(new Server(vnode, state()));
    it = servers_.emplace(std::move(vnode), std::move(server)).first;
  }
  return *it->second;
}

std::vector<std::string> GenericService::virtualNodes() const {
  std::vector<std::string> out;
  for (const auto& [vnode, server] : servers_) out.push_back(vnode);
  return out;
}

void GenericService::render(RenderContext& ctx) {
  for (const auto& [vnode, server] : servers_) {
    Node& node = ctx.resolve(vnode);
    for (const auto& package : server->software_) node.addSoftware(package);
    for (const auto& [path, content] : server->files_) node.setFile(content, path);
    for (const auto& command : server->buildCommands_) node.addBuildCommand(command);
    for (const auto& command : server->startCommands_) node.appendStartCommand(command);
  }
}

nlohmann::json GenericService::describeSpec() const {
  nlohmann::ordered_json servers = nlohmann::ordered_json::array();
  for (const auto& [vnode, server] : servers_) {
    nlohmann::ordered_json entry;
    entry["vnode"] = vnode;
    entry["software"] = server->software_;
    auto& files = entry["files"] = nlohmann::ordered_json::array();
    for (const auto& [path, content] : server->files_) files.push_back({{"path", path}, {"content", content}});
    entry["buildCommands"] = server->buildCommands_;
    entry["startCommands"] = server->startCommands_;
    servers.push_back(std::move(entry));
  }
  return {{"servers", servers}};
}

std::shared_ptr<GenericService> GenericService::fromDocument(const nlohmann::json& layerDocument) {
  auto layer = std::make_shared<GenericService>(layerDocument.at("name").get<std::string>());
  layer->restoreDependencies(layerDocument);
  for (const auto& entry : layerDocument.at("spec").at("servers")) {
    Server& server = layer->install(entry.at("vnode").get<std::string>());
    for (const auto& package : entry.value("software", nlohmann::json::array())) {
      server.addSoftware(package.get<std::string>());
    }
    for (const auto& file : entry.value("files", nlohmann::json::array())) {
      server.setFile(file.at("content").get<std::string>(), file.at("path").get<std::string>());
    }
    for (const auto& command : entry.value("buildCommands", nlohmann::json::array())) {
      server.addBuildCommand(command.get<std::string>());
    }
    for (const auto& command : entry.value("startCommands", nlohmann::json::array())) {
      server.appendStartCommand(command.get<std::string>());
    }
  }
  return layer;
}

}  // namespace emu

#include <sys/socket.h>

#include <atomic>
#include <mutex>

#include <boost/asio/local/stream_protocol.hpp>
#include <boost/asio/read.hpp>
#include <boost/asio/write.hpp>
#include <boost/beast/core/flat_buffer.hpp>
#include <boost/beast/http.hpp>
#include <json.hpp>

#include "emu/error.h"
#include "emu/mapd/runtime.h"

namespace emu::mapd {

namespace asio = boost::asio;
namespace http = boost::beast::http;
using Local = asio::local::stream_protocol;

namespace {

struct Connection {
  asio::io_context io;
  Local::socket socket{io};

  explicit Connection(const std::string& path) {
    boost::system::error_code ec;
    socket.connect(Local::endpoint(path), ec);
    if (ec) throw Error(ErrorCode::kSourceUnavailable, path + ": " + ec.message());
  }
};

http::request<http::string_body> makeRequest(http::verb verb, const std::string& target, const std::string& body) {
  http::request<http::string_body> req{verb, target, 11};
  req.set(http::field::host, "docker");
  if (!body.empty()) {
    req.set(http::field::content_type, "application/json");
    req.body() = body;
  }
  req.prepare_payload();
  return req;
}

nlohmann::json call(const std::string& path, http::verb verb, const std::string& target, const std::string& body = "") {
  Connection conn(path);
  http::response<http::string_body> res;
  try {
    http::write(conn.socket, makeRequest(verb, target, body));
    boost::beast::flat_buffer buffer;
    http::read(conn.socket, buffer, res);
  } catch (const boost::system::system_error& e) {
    throw Error(ErrorCode::kSourceUnavailable, target + ": " + e.what());
  }
  const unsigned status = res.result_int();
  // 404 no such container, 409 container not running.
  if (status == 404 || status == 409) throw Error(ErrorCode::kNodeNotRunning, target + ": " + res.body());
  if (status >= 300) {
    throw Error(ErrorCode::kSourceUnavailable, target + " returned " + std::to_string(status) + ": " + res.body());
  }
  if (res.body().empty()) return nullptr;
  try {
    return nlohmann::json::parse(res.body());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSourceUnavailable, target + ": " + e.what());
  }
}

std::map<std::string, std::string> labelsOf(const nlohmann::json& j) {
  std::map<std::string, std::string> out;
  if (!j.is_object()) return out;
  for (const auto& [key, value] : j.items()) {
    if (value.is_string()) out[key] = value.get<std::string>();
  }
  return out;
}

class DockerExec : public ExecSession {
 public:
  DockerExec(std::unique_ptr<Connection> conn, std::string leftover)
      : conn_(std::move(conn)), leftover_(std::move(leftover)) {}
  ~DockerExec() override { close(); }

  std::string read() override {
    if (!leftover_.empty()) return std::exchange(leftover_, {});
    if (closed_) return {};
    char chunk[4096];
    boost::system::error_code ec;
    const size_t n = conn_->socket.read_some(asio::buffer(chunk), ec);
    if (ec) return {};
    return std::string(chunk, n);
  }

  void write(const std::string& bytes) override {
    std::lock_guard lock(writeMutex_);
    if (closed_) return;
    boost::system::error_code ec;
    asio::write(conn_->socket, asio::buffer(bytes), ec);
  }

  void close() override {
    if (closed_.exchange(true)) return;
    // Plain shutdown(2) wakes a reader blocked on another thread.
    ::shutdown(conn_->socket.native_handle(), SHUT_RDWR);
  }

 private:
  std::unique_ptr<Connection> conn_;
  std::string leftover_;
  std::mutex writeMutex_;
  std::atomic<bool> closed_{false};
};

}  // namespace

DockerRuntime::DockerRuntime(std::string socketPath, std::string apiVersion)
    : socketPath_(std::move(socketPath)), apiVersion_(std::move(apiVersion)) {}

std::vector<LabeledContainer> DockerRuntime::containers() {
  const auto list = call(socketPath_, http::verb::get, "/" + apiVersion_ + "/containers/json?all=1");
  std::vector<LabeledContainer> out;
  for (const auto& entry : list) {
    LabeledContainer container;
    std::string name = entry.value("Names", nlohmann::json::array()).empty()
                           ? entry.value("Id", "")
                           : entry["Names"][0].get<std::string>();
    if (!name.empty() && name[0] == '/') name.erase(0, 1);
    container.id = name;
    container.labels = labelsOf(entry.value("Labels", nlohmann::json::object()));
    container.running = entry.value("State", "") == "running";
    // Only emulation containers carry node labels.
    if (!container.labels.count("emu.node.name")) continue;
    out.push_back(std::move(container));
  }
  return out;
}

std::vector<LabeledNetwork> DockerRuntime::networks() {
  const auto list = call(socketPath_, http::verb::get, "/" + apiVersion_ + "/networks");
  std::vector<LabeledNetwork> out;
  for (const auto& entry : list) {
    LabeledNetwork network;
    network.key = entry.value("Name", "");
    network.labels = labelsOf(entry.value("Labels", nlohmann::json::object()));
    if (entry.contains("IPAM") && entry["IPAM"].contains("Config") && entry["IPAM"]["Config"].is_array() &&
        !entry["IPAM"]["Config"].empty()) {
      network.subnet = entry["IPAM"]["Config"][0].value("Subnet", "");
    }
    out.push_back(std::move(network));
  }
  return out;
}

std::unique_ptr<ExecSession> DockerRuntime::exec(const std::string& containerId,
                                                 const std::vector<std::string>& command) {
  nlohmann::json create = {{"AttachStdin", true}, {"AttachStdout", true}, {"AttachStderr", true},
                           {"Tty", true},         {"Cmd", command}};
  const auto created =
      call(socketPath_, http::verb::post, "/" + apiVersion_ + "/containers/" + containerId + "/exec", create.dump());
  const std::string execId = created.value("Id", "");
  if (execId.empty()) throw Error(ErrorCode::kSourceUnavailable, "exec create returned no id");

  auto conn = std::make_unique<Connection>(socketPath_);
  auto req = makeRequest(http::verb::post, "/" + apiVersion_ + "/exec/" + execId + "/start",
                         nlohmann::json{{"Detach", false}, {"Tty", true}}.dump());
  req.set(http::field::connection, "Upgrade");
  req.set(http::field::upgrade, "tcp");
  boost::beast::flat_buffer buffer;
  http::response_parser<http::empty_body> parser;
  try {
    http::write(conn->socket, req);
    http::read_header(conn->socket, buffer, parser);
  } catch (const boost::system::system_error& e) {
    throw Error(ErrorCode::kSourceUnavailable, "exec start: " + std::string(e.what()));
  }
  const unsigned status = parser.get().result_int();
  if (status == 404 || status == 409) throw Error(ErrorCode::kNodeNotRunning, containerId);
  if (status != 101 && status != 200) {
    throw Error(ErrorCode::kSourceUnavailable, "exec start returned " + std::to_string(status));
  }
  // Anything read past the header already belongs to the raw stream.
  std::string leftover(static_cast<const char*>(buffer.data().data()), buffer.size());
  return std::make_unique<DockerExec>(std::move(conn), std::move(leftover));
}

}  // namespace emu::mapd

#include "emu/mapd/server.h"

#include <condition_variable>
#include <deque>
#include <fstream>
#include <shared_mutex>
#include <sstream>
#include <thread>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <json.hpp>

#include "emu/error.h"

namespace emu::mapd {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;

namespace {

http::status statusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kFilterRejected:
      return http::status::bad_request;
    case ErrorCode::kUnknownRecording:
    case ErrorCode::kUnknownNode:
    case ErrorCode::kNodeNotRunning:
      return http::status::not_found;
    case ErrorCode::kOfflineMode:
      return http::status::conflict;
    case ErrorCode::kSourceUnavailable:
      return http::status::service_unavailable;
    default:
      return http::status::internal_server_error;
  }
}

Response jsonResponse(const Request& req, http::status status, const nlohmann::json& body) {
  Response res{status, req.version()};
  res.set(http::field::server, "mapd");
  res.set(http::field::content_type, "application/json");
  res.keep_alive(req.keep_alive());
  res.body() = body.dump();
  res.prepare_payload();
  return res;
}

Response errorResponse(const Request& req, http::status status, std::string_view name, const std::string& detail) {
  return jsonResponse(req, status, {{"error", name}, {"detail", detail}});
}

Response errorResponse(const Request& req, const Error& e) {
  // what() is "Name: detail".
  std::string detail = e.what();
  const std::string prefix = std::string(errorCodeName(e.code())) + ": ";
  if (detail.rfind(prefix, 0) == 0) detail.erase(0, prefix.size());
  return errorResponse(req, statusFor(e.code()), errorCodeName(e.code()), detail);
}

std::string_view mimeType(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".html") return "text/html";
  if (ext == ".js") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  return "application/octet-stream";
}

nlohmann::json parseBody(const Request& req) {
  try {
    auto body = nlohmann::json::parse(req.body());
    if (!body.is_object()) throw Error(ErrorCode::kInvalidArgument, "request body must be a JSON object");
    return body;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T field(const nlohmann::json& body, const char* name) {
  if (!body.contains(name)) throw Error(ErrorCode::kInvalidArgument, std::string("missing field ") + name);
  try {
    return body.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kInvalidArgument, std::string("field ") + name + " has the wrong type");
  }
}

nlohmann::json recordingJson(const Recording& recording, bool withEvents) {
  nlohmann::ordered_json out;
  out["id"] = recording.id;
  out["filterExpr"] = recording.filterExpr;
  out["count"] = recording.events.size();
  if (withEvents) {
    auto& events = out["events"] = nlohmann::ordered_json::array();
    for (const auto& event : recording.events) events.push_back(nlohmann::ordered_json(event.toJson()));
  }
  return out;
}

}  // namespace

struct Server::Impl {
  Backend& backend;
  ServerOptions options;
  asio::io_context io;
  tcp::acceptor acceptor{io};
  std::vector<std::thread> threads;

  // Cross-thread posts into `io` go through the gate so none arrive after stop().
  std::shared_mutex gate;
  bool open = false;

  std::mutex consoleMutex;
  std::condition_variable consoleDone;
  int consoleReaders = 0;
  std::vector<std::weak_ptr<ExecSession>> consoles;

  std::mutex stateMutex;
  std::condition_variable stopped;
  bool running = false;

  Impl(Backend& b, ServerOptions o) : backend(b), options(std::move(o)) {}

  template <typename Executor, typename Fn>
  void postFromOutside(const Executor& executor, Fn&& fn) {
    std::shared_lock lock(gate);
    if (open) asio::post(executor, std::forward<Fn>(fn));
  }

  void doAccept();
  Response handle(const Request& req);
};

namespace {

class EventSession : public std::enable_shared_from_this<EventSession> {
 public:
  EventSession(tcp::socket socket, Server::Impl& impl) : ws_(std::move(socket)), impl_(impl) {}

  void run(Request req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) { self->onAccept(ec); });
  }

 private:
  void onAccept(beast::error_code ec) {
    if (ec) return;
    std::weak_ptr<EventSession> weak = weak_from_this();
    auto executor = ws_.get_executor();
    Server::Impl* impl = &impl_;
    subscription_ = impl_.backend.hub().subscribe(impl_.options.queueCapacity, [weak, executor, impl] {
      if (weak.expired()) return;
      impl->postFromOutside(executor, [weak] {
        if (auto self = weak.lock()) self->pump();
      });
    });
    doRead();
    pump();
  }

  void doRead() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, size_t) {
      if (ec) return self->finish();
      self->buffer_.consume(self->buffer_.size());
      self->doRead();
    });
  }

  void pump() {
    if (writing_ || closed_) return;
    const uint64_t dropped = subscription_->dropped();
    if (dropped > reportedDropped_) {
      out_ = nlohmann::json{{"type", "dropped"}, {"count", dropped}}.dump();
      reportedDropped_ = dropped;
    } else if (auto event = subscription_->tryPop()) {
      out_ = event->wire();
    } else {
      return;
    }
    writing_ = true;
    ws_.text(true);
    ws_.async_write(asio::buffer(out_), [self = shared_from_this()](beast::error_code ec, size_t) {
      self->writing_ = false;
      if (ec) return self->finish();
      self->pump();
    });
  }

  void finish() {
    if (closed_) return;
    closed_ = true;
    impl_.backend.hub().unsubscribe(subscription_);
  }

  websocket::stream<beast::tcp_stream> ws_;
  Server::Impl& impl_;
  beast::flat_buffer buffer_;
  std::shared_ptr<Subscription> subscription_;
  std::string out_;
  uint64_t reportedDropped_ = 0;
  bool writing_ = false;
  bool closed_ = false;
};

class ConsoleSession : public std::enable_shared_from_this<ConsoleSession> {
 public:
  ConsoleSession(tcp::socket socket, Server::Impl& impl, std::shared_ptr<ExecSession> exec)
      : ws_(std::move(socket)), impl_(impl), exec_(std::move(exec)) {}

  void run(Request req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return self->exec_->close();
      self->ws_.binary(true);
      self->startReader();
      self->doRead();
    });
  }

 private:
  void startReader() {
    {
      std::lock_guard lock(impl_.consoleMutex);
      ++impl_.consoleReaders;
      impl_.consoles.push_back(exec_);
    }
    std::thread([self = shared_from_this()]() mutable {
      Server::Impl& impl = self->impl_;
      auto executor = self->ws_.get_executor();
      for (;;) {
        std::string chunk = self->exec_->read();
        if (chunk.empty()) break;
        impl.postFromOutside(executor, [self, chunk = std::move(chunk)]() mutable {
          self->queue_.push_back(std::move(chunk));
          self->flush();
        });
      }
      impl.postFromOutside(executor, [self] {
        self->ending_ = true;
        self->flush();
      });
      self.reset();
      std::lock_guard lock(impl.consoleMutex);
      --impl.consoleReaders;
      impl.consoleDone.notify_all();
    }).detach();
  }

  void doRead() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, size_t) {
      if (ec) return self->exec_->close();
      self->exec_->write(beast::buffers_to_string(self->buffer_.data()));
      self->buffer_.consume(self->buffer_.size());
      self->doRead();
    });
  }

  void flush() {
    if (writing_) return;
    if (queue_.empty()) {
      if (ending_ && !closing_) {
        closing_ = true;
        ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
      }
      return;
    }
    writing_ = true;
    ws_.async_write(asio::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, size_t) {
      self->writing_ = false;
      if (ec) return self->exec_->close();
      self->queue_.pop_front();
      self->flush();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  Server::Impl& impl_;
  std::shared_ptr<ExecSession> exec_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  bool writing_ = false;
  bool ending_ = false;
  bool closing_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, Server::Impl& impl) : stream_(std::move(socket)), impl_(impl) {}

  void run() {
    asio::dispatch(stream_.get_executor(), [self = shared_from_this()] { self->doRead(); });
  }

 private:
  void doRead() {
    parser_.emplace();
    parser_->body_limit(1 << 20);
    stream_.expires_after(std::chrono::seconds(60));
    http::async_read(stream_, buffer_, *parser_, [self = shared_from_this()](beast::error_code ec, size_t) {
      self->onRead(ec);
    });
  }

  void onRead(beast::error_code ec) {
    if (ec) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    Request req = parser_->release();
    if (websocket::is_upgrade(req)) return upgrade(std::move(req));
    send(impl_.handle(req));
  }

  void upgrade(Request req) {
    const std::string target(req.target());
    stream_.expires_never();
    if (target == "/ws/events") {
      std::make_shared<EventSession>(stream_.release_socket(), impl_)->run(std::move(req));
      return;
    }
    static constexpr std::string_view kConsole = "/ws/console/";
    if (target.rfind(kConsole, 0) == 0 && target.size() > kConsole.size()) {
      std::shared_ptr<ExecSession> exec;
      try {
        exec = impl_.backend.attachConsole(target.substr(kConsole.size()));
      } catch (const Error& e) {
        return send(errorResponse(req, e));
      }
      std::make_shared<ConsoleSession>(stream_.release_socket(), impl_, std::move(exec))->run(std::move(req));
      return;
    }
    send(errorResponse(req, http::status::not_found, "NotFound", target));
  }

  void send(Response res) {
    auto owned = std::make_shared<Response>(std::move(res));
    http::async_write(stream_, *owned, [self = shared_from_this(), owned](beast::error_code ec, size_t) {
      if (ec) return;
      if (owned->need_eof()) {
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
        return;
      }
      self->doRead();
    });
  }

  beast::tcp_stream stream_;
  Server::Impl& impl_;
  beast::flat_buffer buffer_;
  std::optional<http::request_parser<http::string_body>> parser_;
};

}  // namespace

void Server::Impl::doAccept() {
  acceptor.async_accept(asio::make_strand(io), [this](beast::error_code ec, tcp::socket socket) {
    if (ec == asio::error::operation_aborted) return;
    if (!ec) std::make_shared<HttpSession>(std::move(socket), *this)->run();
    doAccept();
  });
}

Response Server::Impl::handle(const Request& req) {
  const std::string target(req.target());
  const std::string path = target.substr(0, target.find('?'));
  const bool get = req.method() == http::verb::get;
  const bool post = req.method() == http::verb::post;
  try {
    if (path == "/api/topology" && get) return jsonResponse(req, http::status::ok, backend.topology()->toJson());
    if (path.rfind("/api/nodes/", 0) == 0 && get) {
      const std::string id = path.substr(std::string("/api/nodes/").size());
      auto node = backend.node(id);
      if (!node) throw Error(ErrorCode::kUnknownNode, id);
      return jsonResponse(req, http::status::ok, nodeJson(*node));
    }
    if (path == "/api/status" && get) {
      return jsonResponse(req, http::status::ok,
                          {{"mode", modeName(backend.mode())},
                           {"source", backend.source().name()},
                           {"filter", backend.filter()},
                           {"recording", backend.recorder().recording()}});
    }
    if (path == "/api/filter") {
      if (get) return jsonResponse(req, http::status::ok, {{"expr", backend.filter()}});
      if (post) {
        const auto expr = field<std::string>(parseBody(req), "expr");
        backend.setFilter(expr);
        return jsonResponse(req, http::status::ok, {{"expr", expr}});
      }
    }
    if (path == "/api/recordings") {
      if (get) {
        auto list = nlohmann::json::array();
        for (const auto& id : backend.recorder().ids()) {
          if (auto recording = backend.recorder().find(id)) list.push_back(recordingJson(*recording, false));
        }
        return jsonResponse(req, http::status::ok,
                            {{"recording", backend.recorder().recording()}, {"recordings", list}});
      }
      if (post) {
        const auto action = field<std::string>(parseBody(req), "action");
        if (action == "start") {
          return jsonResponse(req, http::status::created, {{"id", backend.startRecording()}, {"state", "recording"}});
        }
        if (action == "stop") return jsonResponse(req, http::status::ok, recordingJson(backend.stopRecording(), true));
        throw Error(ErrorCode::kInvalidArgument, "action must be start or stop");
      }
    }
    if (path.rfind("/api/recordings/", 0) == 0 && get) {
      const std::string id = path.substr(std::string("/api/recordings/").size());
      auto recording = backend.recorder().find(id);
      if (!recording) throw Error(ErrorCode::kUnknownRecording, id);
      return jsonResponse(req, http::status::ok, recordingJson(*recording, true));
    }
    if (path == "/api/replay" && post) {
      const auto body = parseBody(req);
      const auto id = field<std::string>(body, "id");
      const auto interval = field<int>(body, "intervalMs");
      backend.replay(id, interval);
      return jsonResponse(req, http::status::accepted, {{"id", id}, {"intervalMs", interval}});
    }
    if (path.rfind("/api/", 0) == 0) {
      return errorResponse(req, http::status::not_found, "NotFound", req.method_string().to_string() + " " + path);
    }
    if (get && !options.staticDir.empty()) {
      const std::string relative = path == "/" ? "map.html" : path.substr(1);
      const std::filesystem::path file = options.staticDir / relative;
      if (relative.find("..") == std::string::npos && std::filesystem::is_regular_file(file)) {
        std::ifstream in(file, std::ios::binary);
        std::ostringstream content;
        content << in.rdbuf();
        Response res{http::status::ok, req.version()};
        res.set(http::field::content_type, std::string(mimeType(file)));
        res.keep_alive(req.keep_alive());
        res.body() = content.str();
        res.prepare_payload();
        return res;
      }
    }
    return errorResponse(req, http::status::not_found, "NotFound", path);
  } catch (const Error& e) {
    return errorResponse(req, e);
  }
}

Server::Server(Backend& backend, ServerOptions options) : impl_(std::make_unique<Impl>(backend, std::move(options))) {}

Server::~Server() { stop(); }

void Server::start() {
  Impl& impl = *impl_;
  const tcp::endpoint endpoint(asio::ip::make_address(impl.options.address), impl.options.port);
  impl.acceptor.open(endpoint.protocol());
  impl.acceptor.set_option(asio::socket_base::reuse_address(true));
  impl.acceptor.bind(endpoint);
  impl.acceptor.listen(asio::socket_base::max_listen_connections);
  {
    std::unique_lock lock(impl.gate);
    impl.open = true;
  }
  {
    std::lock_guard lock(impl.stateMutex);
    impl.running = true;
  }
  impl.doAccept();
  for (int i = 0; i < std::max(1, impl.options.threads); ++i) impl.threads.emplace_back([&impl] { impl.io.run(); });
}

void Server::stop() {
  Impl& impl = *impl_;
  {
    std::lock_guard lock(impl.stateMutex);
    if (!impl.running) return;
    impl.running = false;
  }
  {
    std::unique_lock lock(impl.gate);
    impl.open = false;
  }
  asio::post(impl.io, [&impl] {
    beast::error_code ec;
    impl.acceptor.close(ec);
  });
  {
    std::unique_lock lock(impl.consoleMutex);
    for (auto& weak : impl.consoles) {
      if (auto exec = weak.lock()) exec->close();
    }
    impl.consoleDone.wait(lock, [&impl] { return impl.consoleReaders == 0; });
    impl.consoles.clear();
  }
  impl.io.stop();
  for (auto& thread : impl.threads) thread.join();
  impl.threads.clear();
  impl.stopped.notify_all();
}

void Server::wait() {
  std::unique_lock lock(impl_->stateMutex);
  impl_->stopped.wait(lock, [this] { return !impl_->running; });
}

uint16_t Server::port() const {
  beast::error_code ec;
  return impl_->acceptor.local_endpoint(ec).port();
}

}  // namespace emu::mapd

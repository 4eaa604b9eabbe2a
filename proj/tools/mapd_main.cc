#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "emu/error.h"
#include "emu/mapd/backend.h"
#include "emu/mapd/server.h"

int main(int argc, char** argv) {
  CLI::App app{"Map backend for a running or compiled emulation"};

  std::string mode = "live";
  emu::mapd::BackendOptions backendOptions;
  emu::mapd::ServerOptions serverOptions;
  std::string manifest;
  std::string staticDir;

  app.add_option("--port", serverOptions.port, "Listen port")->envname("MAPD_PORT")->capture_default_str();
  app.add_option("--address", serverOptions.address, "Listen address")->capture_default_str();
  app.add_option("--mode", mode, "live or offline")->envname("MAPD_MODE")->capture_default_str();
  app.add_option("--runtime-socket", backendOptions.runtimeSocket, "Docker Engine socket")
      ->envname("MAPD_RUNTIME_SOCKET")
      ->capture_default_str();
  app.add_option("--manifest", manifest, "Compiled output directory (offline)")->envname("MAPD_MANIFEST");
  app.add_option("--static-dir", staticDir, "Directory served at /")->envname("MAPD_STATIC_DIR");
  app.add_option("--source", backendOptions.source, "Event source plugin")->envname("MAPD_SOURCE");
  app.add_option("--tick-ms", backendOptions.tickMs, "Scripted event period, 0 = off")
      ->envname("MAPD_TICK_MS")
      ->capture_default_str();
  app.add_option("--seed", backendOptions.seed, "Scripted generator seed")->envname("MAPD_SEED");
  app.add_option("--threads", serverOptions.threads, "I/O threads")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  // Handled by sigwait below.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    backendOptions.mode = emu::mapd::parseMode(mode);
    backendOptions.manifest = manifest;
    if (backendOptions.mode == emu::mapd::Mode::kOffline && manifest.empty()) {
      throw emu::Error(emu::ErrorCode::kInvalidArgument, "offline mode needs --manifest / MAPD_MANIFEST");
    }
    serverOptions.staticDir = staticDir;
    emu::mapd::Backend backend(backendOptions);
    emu::mapd::Server server(backend, serverOptions);
    server.start();
    std::cerr << "mapd " << emu::mapd::modeName(backend.mode()) << " listening on " << serverOptions.address << ":"
              << server.port() << "\n";
    int received = 0;
    sigwait(&signals, &received);
    server.stop();
    backend.shutdown();
  } catch (const emu::Error& e) {
    std::cerr << "mapd: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "mapd: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

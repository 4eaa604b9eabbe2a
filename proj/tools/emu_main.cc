#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "emu/analysis.h"
#include "emu/compile.h"
#include "emu/error.h"
#include "emu/scenario.h"

namespace {

using nlohmann::json;

std::string pathText(const std::vector<int>& path) {
  std::string out = "[";
  for (size_t i = 0; i < path.size(); ++i) out += (i ? " " : "") + std::to_string(path[i]);
  return out + "]";
}

json entryJson(int asn, const emu::RibEntry& entry) {
  return {{"asn", asn},
          {"prefix", entry.prefix.toString()},
          {"asPath", entry.asPath},
          {"learnedFrom", emu::routeClassName(entry.learnedFrom)},
          {"pref", entry.pref}};
}

json traceJson(const emu::TraceResult& trace) {
  return {{"reachable", trace.reachable}, {"hops", trace.hops}, {"asPath", trace.asPath}, {"reason", trace.reason}};
}

void printTrace(const emu::TraceResult& trace) {
  std::cout << (trace.reachable ? "reachable" : "unreachable") << " (" << trace.reason << ")\n";
  for (const auto& hop : trace.hops) std::cout << "  " << hop << "\n";
}

void writeReport(const std::string& path, const json& report) {
  if (path.empty()) return;
  std::ofstream out(path);
  out << report.dump(2) << "\n";
  if (!out) throw emu::Error(emu::ErrorCode::kIoError, "cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Internet emulator toolkit"};
  app.require_subcommand(1);

  std::string file;
  std::optional<uint64_t> seed;

  auto* compile = app.add_subcommand("compile", "Render a scenario and emit artifacts");
  std::string format = "containers";
  std::string outDir;
  std::string image;
  bool force = false;
  compile->add_option("--format", format, "containers or graph")->check(CLI::IsMember({"containers", "graph"}));
  compile->add_option("--out", outDir, "Output directory")->required();
  compile->add_option("--seed", seed, "Render seed (overrides the scenario)");
  compile->add_option("--image", image, "Container base image");
  compile->add_flag("--force", force, "Replace a non-empty output directory");
  compile->add_option("FILE", file, "Scenario JSON")->required()->check(CLI::ExistingFile);

  auto* analyze = app.add_subcommand("analyze", "Control-plane analysis");
  analyze->require_subcommand(1);
  std::string jsonOut;
  analyze->add_option("--seed", seed, "Render seed (overrides the scenario)");
  analyze->add_option("--json", jsonOut, "Also write a JSON report here");

  auto* ribs = analyze->add_subcommand("ribs", "Selected routes per AS");
  std::optional<int> onlyAs;
  ribs->add_option("--as", onlyAs, "Limit to one AS");
  ribs->add_option("FILE", file)->required()->check(CLI::ExistingFile);

  auto* trace = analyze->add_subcommand("trace", "Forwarding path from a node to an address");
  std::string from, to;
  trace->add_option("--from", from, "Source node key, e.g. 150/host0")->required();
  trace->add_option("--to", to, "Destination address")->required();
  trace->add_option("FILE", file)->required()->check(CLI::ExistingFile);

  auto* hijack = analyze->add_subcommand("hijack", "What-if announcement of a prefix");
  int attacker = 0;
  std::string prefix;
  hijack->add_option("--attacker", attacker, "Announcing ASN")->required();
  hijack->add_option("--prefix", prefix, "Announced prefix")->required();
  hijack->add_option("FILE", file)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    emu::Emulator emulator = emu::loadScenario(file, seed);
    emu::RenderedEmulation rendered = emulator.render();

    if (compile->parsed()) {
      if (format == "graph") {
        std::filesystem::create_directories(outDir);
        std::ofstream out(std::filesystem::path(outDir) / "topology.dot");
        out << emu::compileGraph(rendered);
        if (!out) throw emu::Error(emu::ErrorCode::kIoError, "cannot write topology.dot");
      } else {
        emu::CompileOptions options;
        options.overwrite = force;
        if (!image.empty()) options.baseImage = image;
        auto manifest = emu::compileContainers(rendered, outDir, options);
        std::cout << manifest.services.size() << " containers, " << manifest.networks.size() << " networks\n";
      }
      return 0;
    }

    auto model = emu::ControlPlaneModel::fromRendered(rendered);
    if (ribs->parsed()) {
      auto result = emu::computeRibs(model);
      json report = json::array();
      for (const auto& [asn, table] : result.ases) {
        if (onlyAs && *onlyAs != asn) continue;
        for (const auto& [p, entry] : table) {
          std::cout << "AS" << asn << " " << p.toString() << " " << emu::routeClassName(entry.learnedFrom)
                    << " pref=" << entry.pref << " path=" << pathText(entry.asPath) << "\n";
          report.push_back(entryJson(asn, entry));
        }
      }
      writeReport(jsonOut, report);
    } else if (trace->parsed()) {
      auto result = emu::tracePath(model, from, emu::Ipv4Address::fromString(to));
      printTrace(result);
      writeReport(jsonOut, traceJson(result));
    } else if (hijack->parsed()) {
      auto diff = emu::whatIfAnnounce(model, attacker, emu::Ipv4Prefix::fromString(prefix));
      std::cout << "target " << diff.target.toString() << ": " << diff.changed.size() << " of "
                << diff.sources.size() << " sources changed\n";
      json report = {{"target", diff.target.toString()}, {"changed", json::array()}};
      for (const auto& change : diff.changed) {
        std::cout << "AS" << change.sourceAsn << " " << change.sourceNode << " " << pathText(change.before.asPath)
                  << " -> " << pathText(change.after.asPath) << "\n";
        report["changed"].push_back({{"asn", change.sourceAsn},
                                     {"source", change.sourceNode},
                                     {"before", traceJson(change.before)},
                                     {"after", traceJson(change.after)}});
      }
      writeReport(jsonOut, report);
    }
    return 0;
  } catch (const emu::Error& e) {
    std::cerr << "emu: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "emu: " << e.what() << "\n";
    return 1;
  }
}

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sirdiv/version.hpp"

namespace sirdiv {

/// Provenance record written next to every output file: the command line,
/// the fully resolved configuration, and the run metadata. Re-running the
/// recorded command reproduces the output byte for byte.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  double duration_seconds = 0.0;
};

inline std::string manifest_json(const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["config"] = m.config;
  j["seed"] = m.seed;
  j["version"] = kVersion;
  j["duration_seconds"] = m.duration_seconds;
  return j.dump(2) + "\n";
}

inline std::filesystem::path manifest_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  p += ".manifest.json";
  return p;
}

inline void write_manifest(const std::filesystem::path& out_file,
                           const RunManifest& m) {
  std::ofstream os(manifest_path(out_file));
  if (!os)
    throw std::runtime_error("cannot write manifest next to " +
                             out_file.string());
  os << manifest_json(m);
}

}  // namespace sirdiv

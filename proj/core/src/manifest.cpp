#include "ctpi/manifest.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ctpi/common.hpp"
#include "ctpi/version.hpp"

namespace ctpi::cli {

namespace {

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.good()) throw NumericError("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

}  // namespace

void write_manifest(const std::string& path, const RunManifest& manifest) {
  nlohmann::json j;
  j["schema_version"] = manifest.schema_version;
  j["tool_version"] = manifest.tool_version.empty() ? kVersion
                                                    : manifest.tool_version;
  j["command"] = manifest.command;
  j["threads"] = manifest.threads;
  j["seed"] = manifest.seed;
  j["config"] = manifest.config_path;
  j["wall_times_s"] = manifest.wall_times_s;
  j["results"] = manifest.scalars;
  j["beta_bar"] = manifest.beta_bar;
  j["warnings"] = manifest.warnings;
  j["outputs"] = manifest.outputs;
  atomic_write(path, j.dump(2) + "\n");
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::string content;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) content += ',';
    content += header[i];
  }
  content += '\n';
  char buf[64];
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw std::invalid_argument("write_csv: row width does not match header");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) content += ',';
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      content += buf;
    }
    content += '\n';
  }
  atomic_write(path, content);
}

}  // namespace ctpi::cli

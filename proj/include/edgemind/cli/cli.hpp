#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace edgemind::cli {

struct RunOptions {
  std::string command;  // simulate | cluster | eval-clusters | forecast | rank-routes
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::filesystem::path out_dir = ".";
};

struct RunResult {
  std::vector<std::filesystem::path> outputs;  // excluding the manifest
  std::filesystem::path manifest;
};

// Runs one subcommand and writes its outputs plus manifest.json into
// out_dir. Throws edgemind::Error subclasses.
RunResult run(const RunOptions& options);

// 0 ok, 1 config error, 2 data error, 3 numerical failure.
int exit_code(const std::exception& e);

int main(int argc, char** argv);

}  // namespace edgemind::cli

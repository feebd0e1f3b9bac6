#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace edgemind::cli {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

struct Manifest {
  std::string command;
  std::string config_sha256;
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> outputs;  // checksummed by file name
};

// Key order is fixed and no wall-clock data is recorded, so equal runs give
// equal manifests.
void write_manifest(const std::filesystem::path& path, const Manifest& m);

}  // namespace edgemind::cli

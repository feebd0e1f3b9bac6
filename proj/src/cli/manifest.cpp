#include "manifest.hpp"

#include <array>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "edgemind/common/errors.hpp"

#ifndef EDGEMIND_VERSION
#define EDGEMIND_VERSION "unknown"
#endif

namespace edgemind::cli {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCategory::data, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::data, "cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "edgemind";
  j["version"] = EDGEMIND_VERSION;
  j["command"] = m.command;
  j["config_sha256"] = m.config_sha256;
  j["seed"] = m.seed;
  nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
  for (const auto& p : m.outputs) outputs[p.filename().string()] = sha256_file(p);
  j["outputs"] = outputs;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::data, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace edgemind::cli

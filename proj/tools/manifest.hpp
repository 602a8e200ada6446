#pragma once

// Run manifests: one JSON file next to every output recording what produced
// it, so the output can be regenerated exactly.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace qi::tools {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string sha256Hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

inline std::string utcTimestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct OutputFile {
  std::string path;
  std::string contents;
};

class RunManifest {
 public:
  RunManifest(std::string command, nlohmann::ordered_json parameters, std::uint64_t seed, std::string rngAlgorithm)
      : command_(std::move(command)), parameters_(std::move(parameters)), seed_(seed), rng_(std::move(rngAlgorithm)) {}

  void addOutput(const OutputFile& f) {
    outputs_.push_back({{"path", f.path}, {"sha256", sha256Hex(f.contents)}, {"bytes", f.contents.size()}});
  }

  void setSummary(nlohmann::ordered_json s) { summary_ = std::move(s); }

  nlohmann::ordered_json json() const {
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["parameters"] = parameters_;
    j["seed"] = seed_;
    j["rng_algorithm"] = rng_;
    j["tool_version"] = kToolVersion;
    j["timestamp"] = utcTimestamp();
    j["outputs"] = outputs_;
    if (!summary_.is_null()) j["summary"] = summary_;
    return j;
  }

 private:
  std::string command_;
  nlohmann::ordered_json parameters_;
  std::uint64_t seed_;
  std::string rng_;
  nlohmann::ordered_json outputs_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json summary_;
};

/// Writes every output and, next to the first, "<path>.manifest.json".
inline void writeOutputs(const std::vector<OutputFile>& files, RunManifest manifest) {
  for (const auto& f : files) {
    std::ofstream os(f.path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output file '" + f.path + "'");
    os << f.contents;
    if (!os) throw std::invalid_argument("failed writing output file '" + f.path + "'");
    manifest.addOutput(f);
  }
  const std::string path = files.front().path + ".manifest.json";
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::invalid_argument("cannot open manifest file '" + path + "'");
  os << manifest.json().dump(2) << '\n';
}

}  // namespace qi::tools

#pragma once

// Content-addressed result cache. Entries are keyed by the SHA-256 of the
// canonical request encoding plus the tool version, and written atomically.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include <openssl/evp.h>

#include <json.hpp>

#include "zslab/error.hpp"

namespace zslab {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

struct CacheEntry {
  std::string digest;
  std::string version;
  std::string timestamp;
  int exit_code = 0;
  std::string result;
};

struct CachedResult {
  int exit_code = 0;
  std::string result;
  bool hit = false;
};

class ResultCache {
public:
  ResultCache(std::filesystem::path dir, std::string version = kToolVersion)
      : dir_(std::move(dir)), version_(std::move(version)) {}

  std::string digest(const std::string& canonical_request) const {
    return sha256_hex(version_ + "\n" + canonical_request);
  }

  std::filesystem::path entry_path(const std::string& digest) const { return dir_ / (digest + ".json"); }

  std::optional<CacheEntry> lookup(const std::string& digest, std::ostream& warn) const {
    const auto path = entry_path(digest);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    try {
      std::ifstream in(path, std::ios::binary);
      const auto j = nlohmann::json::parse(in);
      CacheEntry e{j.at("digest").get<std::string>(), j.at("version").get<std::string>(),
                   j.at("timestamp").get<std::string>(), j.at("exit_code").get<int>(),
                   j.at("result").get<std::string>()};
      if (e.digest != digest || e.version != version_) {
        warn << "warning: cache entry " << path.string() << " does not match its key; recomputing\n";
        return std::nullopt;
      }
      return e;
    } catch (const std::exception&) {
      warn << "warning: corrupt cache entry " << path.string() << "; recomputing\n";
      return std::nullopt;
    }
  }

  void store(const std::string& digest, int exit_code, const std::string& result) const {
    std::filesystem::create_directories(dir_);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    const nlohmann::json j{{"digest", digest}, {"version", version_}, {"timestamp", ts.str()},
                           {"exit_code", exit_code}, {"result", result}};
    std::random_device rd;
    const auto tmp = dir_ / (digest + ".tmp." + std::to_string(rd()));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << j.dump();
      if (!out) throw std::runtime_error("cannot write cache entry " + tmp.string());
    }
    std::filesystem::rename(tmp, entry_path(digest));
  }

  // Serve from cache, or compute (result text, exit code) and store it.
  CachedResult get_or_compute(const std::string& canonical_request, const std::function<CachedResult()>& compute,
                              std::ostream& warn) const {
    const std::string key = digest(canonical_request);
    if (auto e = lookup(key, warn)) return {e->exit_code, e->result, true};
    CachedResult r = compute();
    try {
      store(key, r.exit_code, r.result);
    } catch (const std::exception& ex) {
      warn << "warning: " << ex.what() << "\n";
    }
    r.hit = false;
    return r;
  }

private:
  std::filesystem::path dir_;
  std::string version_;
};

}  // namespace zslab

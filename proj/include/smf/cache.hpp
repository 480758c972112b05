#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "smf/util.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

namespace smf::cache {

namespace fs = std::filesystem;
using Json = nlohmann::json;

inline fs::path default_dir() {
    if (const char* env = std::getenv("SMF_CACHE_DIR")) return fs::path(env);
    return fs::path("smf-cache");
}

struct CacheEntry {
    std::string name;
    int prec = 0;
    std::string checksum;
    std::string path;
};

inline std::string checksum_hex(const std::string& payload) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(payload.data(), payload.size())));
    return std::string(buf);
}

// Lock-file guard for cache writes; spins briefly, then claims a stale lock.
class DirLock {
  public:
    explicit DirLock(const fs::path& dir) : lock_(dir / ".lock") {
        fs::create_directories(dir);
        for (int attempt = 0; attempt < 500; ++attempt) {
            std::FILE* f = std::fopen(lock_.c_str(), "wx");
            if (f) {
                std::fclose(f);
                held_ = true;
                return;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        // stale lock: claim it
        held_ = true;
    }
    ~DirLock() {
        if (held_) {
            std::error_code ec;
            fs::remove(lock_, ec);
        }
    }

  private:
    fs::path lock_;
    bool held_ = false;
};

// write-temporary-then-rename
inline void atomic_write(const fs::path& path, const std::string& payload) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
        out << payload;
    }
    fs::rename(tmp, path);
}

inline CacheEntry store(const fs::path& dir, const std::string& name, int prec,
                        const Json& payload) {
    DirLock lock(dir);
    std::string body = payload.dump();
    CacheEntry e{name, prec, checksum_hex(body), (dir / (name + ".json")).string()};
    atomic_write(dir / (name + ".json"), body);
    Json meta{{"name", e.name}, {"prec", e.prec}, {"checksum", e.checksum}, {"path", e.path}};
    atomic_write(dir / (name + ".meta.json"), meta.dump(2) + "\n");
    return e;
}

// Loads and validates an artifact; returns nothing if absent, throws on a
// checksum mismatch or an entry of lower precision than requested.
inline std::optional<Json> load(const fs::path& dir, const std::string& name, int min_prec) {
    fs::path body_path = dir / (name + ".json");
    fs::path meta_path = dir / (name + ".meta.json");
    if (!fs::exists(body_path) || !fs::exists(meta_path)) return std::nullopt;
    std::ifstream mf(meta_path);
    Json meta = Json::parse(mf);
    if (meta.at("prec").get<int>() < min_prec) return std::nullopt;
    std::stringstream ss;
    ss << std::ifstream(body_path, std::ios::binary).rdbuf();
    std::string body = ss.str();
    if (checksum_hex(body) != meta.at("checksum").get<std::string>())
        throw std::runtime_error("cache: checksum mismatch for " + name);
    return Json::parse(body);
}

}  // namespace smf::cache

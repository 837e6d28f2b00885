#pragma once

#include "hoi/common.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

namespace hoi {

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string prompt_cache_key(std::string_view prompt, std::string_view model) {
    std::uint64_t h = fnv1a64(prompt);
    h = fnv1a64(std::string_view("\x1f", 1), h);
    h = fnv1a64(model, h);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct PromptRecord {
    std::string template_id;
    std::string prompt;
    std::string response;
    std::string model;
    std::string timestamp;  // UTC, ISO 8601

    std::string key() const { return prompt_cache_key(prompt, model); }
};

inline nlohmann::json to_json(const PromptRecord& r) {
    return {{"key", r.key()},          {"template", r.template_id}, {"model", r.model},
            {"timestamp", r.timestamp}, {"prompt", r.prompt},        {"response", r.response}};
}

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Append-only JSON-lines store of prompt/response pairs keyed by
/// (prompt, model). Many readers, one writer at a time. A later record for
/// the same key shadows an earlier one.
class PromptCache {
public:
    PromptCache() = default;

    /// Loads `path` if it exists; appends go to the same file when
    /// `persist` is set.
    explicit PromptCache(std::filesystem::path path, bool persist = true) : path_(std::move(path)), persist_(persist) {
        if (!std::filesystem::exists(path_)) return;
        std::ifstream in(path_);
        if (!in) fail(ErrorKind::Io, "cannot open prompt cache " + path_.string());
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            try {
                const auto j = nlohmann::json::parse(line);
                PromptRecord r{j.value("template", ""), j.at("prompt").get<std::string>(),
                               j.at("response").get<std::string>(), j.at("model").get<std::string>(),
                               j.value("timestamp", "")};
                if (j.contains("key") && j["key"].get<std::string>() != r.key())
                    fail(ErrorKind::InvalidInput, path_.string() + ":" + std::to_string(line_no) + ": key does not match prompt and model");
                records_[r.key()] = std::move(r);
            } catch (const nlohmann::json::exception& e) {
                fail(ErrorKind::InvalidInput, path_.string() + ":" + std::to_string(line_no) + ": " + e.what());
            }
        }
    }

    std::optional<PromptRecord> lookup(std::string_view prompt, std::string_view model) const {
        std::shared_lock lock(mutex_);
        auto it = records_.find(prompt_cache_key(prompt, model));
        if (it == records_.end()) return std::nullopt;
        return it->second;
    }

    void append(const PromptRecord& record) {
        std::unique_lock lock(mutex_);
        if (persist_ && !path_.empty()) {
            if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
            std::ofstream out(path_, std::ios::app);
            if (!out) fail(ErrorKind::Io, "cannot append to prompt cache " + path_.string());
            out << to_json(record).dump() << '\n';
        }
        records_[record.key()] = record;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return records_.size();
    }

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    bool persist_ = false;
    mutable std::shared_mutex mutex_;
    std::map<std::string, PromptRecord> records_;
};

}  // namespace hoi

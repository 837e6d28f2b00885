#pragma once

#include "hoi/priors/client.hpp"

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace hoi {

struct LiveClientConfig {
    std::string base_url = "https://api.openai.com";  // scheme://host[:port]
    std::string path = "/v1/completions";
    std::string model = std::string(kDefaultCompletionModel);
    std::string api_key_env = "HOI_LLM_API_KEY";
    double temperature = 0.0;
    int max_tokens = 64;
    std::vector<std::string> stop = {"\n\n"};
    std::chrono::milliseconds min_interval{1000};
    std::chrono::seconds timeout{30};
    bool allow_network = true;
};

/// Completion client for an OpenAI-style /v1/completions endpoint. Cached
/// prompts are served without a request; fresh completions are appended to
/// the cache.
class LiveClient : public CompletionClient {
public:
    LiveClient(LiveClientConfig config, PromptCache& cache) : config_(std::move(config)), cache_(cache) {}

    std::string complete(std::string_view template_id, const std::string& prompt) override {
        if (auto hit = cache_.lookup(prompt, config_.model)) return hit->response;
        if (!config_.allow_network)
            fail(ErrorKind::CacheMiss, "no cached completion for " + std::string(template_id) +
                                           " prompt and network access is disabled");
        PromptRecord record{std::string(template_id), prompt, request(prompt), config_.model, utc_timestamp()};
        cache_.append(record);
        return record.response;
    }

    std::string model() const override { return config_.model; }

private:
    void throttle() {
        std::unique_lock lock(throttle_mutex_);
        const auto now = std::chrono::steady_clock::now();
        if (last_request_ && now < *last_request_ + config_.min_interval)
            std::this_thread::sleep_until(*last_request_ + config_.min_interval);
        last_request_ = std::chrono::steady_clock::now();
    }

    std::string request(const std::string& prompt) {
        nlohmann::json body = {{"model", config_.model},
                               {"prompt", prompt},
                               {"temperature", config_.temperature},
                               {"max_tokens", config_.max_tokens}};
        if (!config_.stop.empty()) body["stop"] = config_.stop;
        httplib::Headers headers;
        if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key)
            headers.emplace("Authorization", std::string("Bearer ") + key);

        throttle();
        httplib::Client client(config_.base_url);
        client.set_connection_timeout(config_.timeout);
        client.set_read_timeout(config_.timeout);
        auto res = client.Post(config_.path, headers, body.dump(), "application/json");
        if (!res) fail(ErrorKind::Network, "completion request to " + config_.base_url + " failed: " + httplib::to_string(res.error()));
        if (res->status != 200)
            fail(ErrorKind::Network, "completion endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body);
        try {
            return nlohmann::json::parse(res->body).at("choices").at(0).at("text").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::Network, std::string("malformed completion response: ") + e.what());
        }
    }

    LiveClientConfig config_;
    PromptCache& cache_;
    std::mutex throttle_mutex_;
    std::optional<std::chrono::steady_clock::time_point> last_request_;
};

}  // namespace hoi

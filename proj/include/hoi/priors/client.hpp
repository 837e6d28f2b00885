#pragma once

#include "hoi/priors/cache.hpp"

#include <string>

namespace hoi {

/// Text-completion backend for the cloze prompts.
class CompletionClient {
public:
    virtual ~CompletionClient() = default;
    /// Raw completion text for `prompt`.
    virtual std::string complete(std::string_view template_id, const std::string& prompt) = 0;
    virtual std::string model() const = 0;
};

/// Serves completions from a prompt cache only; a miss is an error.
class ReplayClient : public CompletionClient {
public:
    ReplayClient(const PromptCache& cache, std::string model) : cache_(cache), model_(std::move(model)) {}

    std::string complete(std::string_view template_id, const std::string& prompt) override {
        if (auto hit = cache_.lookup(prompt, model_)) return hit->response;
        fail(ErrorKind::CacheMiss, "no cached completion for " + std::string(template_id) + " prompt (key " +
                                       prompt_cache_key(prompt, model_) + ", model " + model_ + ")");
    }

    std::string model() const override { return model_; }

private:
    const PromptCache& cache_;
    std::string model_;
};

inline constexpr std::string_view kDefaultCompletionModel = "text-davinci-002";

}  // namespace hoi

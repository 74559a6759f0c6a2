#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "mqcic/llm/backend.hpp"
#include "mqcic/llm/cache.hpp"
#include "mqcic/llm/types.hpp"

namespace mqcic::llm {

struct RetryPolicy {
    int attempts = 3;
    std::vector<int> backoff_ms = {1000, 4000};
    // Injectable for tests; defaults to std::this_thread::sleep_for.
    std::function<void(int)> sleeper;
};

/// Provider-agnostic completion client: deterministic disk cache in front of
/// a backend, capped-backoff retries on transient failures (429/5xx/
/// timeouts), and a replay-only mode that performs no network I/O at all.
class Gateway {
public:
    /// Live (or scripted) backend with optional cache directory.
    Gateway(std::shared_ptr<ChatBackend> backend, std::optional<std::string> cache_dir,
            RetryPolicy retry = {});

    /// Replay-only: every request must hit the fixture store or FixtureMiss.
    static Gateway replay_only(std::string cache_dir);

    Gateway(Gateway&& o) noexcept
        : backend_(std::move(o.backend_)), cache_(std::move(o.cache_)),
          retry_(std::move(o.retry_)), replay_only_(o.replay_only_),
          run_tag_(std::move(o.run_tag_)), backend_calls_(o.backend_calls_.load()),
          cache_hits_(o.cache_hits_.load()) {}
    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    ChatResponse complete(const ChatRequest& req);

    /// Binary judge: sends the criterion as the system message and the
    /// subject as the user message, then extracts a strict 0/1 from the
    /// reply (same marker vocabulary as final-answer extraction, True -> 1).
    /// Throws UnparseableJudgmentError when no decision can be read.
    int judge_binary(const std::string& judge_model, const std::string& criterion_prompt,
                     const std::string& subject);

    /// Salt mixed into every cache key (repeat-run isolation).
    void set_run_tag(std::string tag) { run_tag_ = std::move(tag); }
    const std::string& run_tag() const { return run_tag_; }

    bool replay_only_mode() const { return replay_only_; }
    long backend_calls() const { return backend_calls_.load(); }
    long cache_hits() const { return cache_hits_.load(); }

private:
    std::shared_ptr<ChatBackend> backend_;
    std::optional<ResponseCache> cache_;
    RetryPolicy retry_;
    bool replay_only_ = false;
    std::string run_tag_;
    std::atomic<long> backend_calls_{0};
    std::atomic<long> cache_hits_{0};
};

}  // namespace mqcic::llm

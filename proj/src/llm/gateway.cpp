#include "mqcic/llm/gateway.hpp"

#include <chrono>
#include <thread>

#include "mqcic/llm/answer_extract.hpp"
#include "mqcic/llm/errors.hpp"

namespace mqcic::llm {

namespace {

bool transient(const BackendError& e) {
    return e.status == 0 || e.status == 429 || (e.status >= 500 && e.status < 600);
}

}  // namespace

Gateway::Gateway(std::shared_ptr<ChatBackend> backend, std::optional<std::string> cache_dir,
                 RetryPolicy retry)
    : backend_(std::move(backend)), retry_(std::move(retry)) {
    if (cache_dir) cache_.emplace(*cache_dir);
    if (!retry_.sleeper)
        retry_.sleeper = [](int ms) { std::this_thread::sleep_for(std::chrono::milliseconds(ms)); };
}

Gateway Gateway::replay_only(std::string cache_dir) {
    Gateway g(nullptr, std::move(cache_dir));
    g.replay_only_ = true;
    return g;
}

ChatResponse Gateway::complete(const ChatRequest& request) {
    ChatRequest req = request;
    if (req.run_tag.empty()) req.run_tag = run_tag_;
    validate_request(req);
    const std::string key = cache_key(req);

    if (cache_) {
        if (auto hit = cache_->get(key)) {
            cache_hits_.fetch_add(1);
            return *hit;
        }
    }
    if (replay_only_ || !backend_) throw FixtureMissError(key);

    ChatResponse resp;
    int attempt = 0;
    for (;;) {
        try {
            const auto start = std::chrono::steady_clock::now();
            backend_calls_.fetch_add(1);
            resp = backend_->complete(req);
            if (resp.latency_ms == 0)
                resp.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                      std::chrono::steady_clock::now() - start)
                                      .count();
            break;
        } catch (const BackendError& e) {
            ++attempt;
            if (!transient(e) || attempt >= retry_.attempts) throw;
            const int idx = std::min<int>(attempt - 1, static_cast<int>(retry_.backoff_ms.size()) - 1);
            if (idx >= 0 && !retry_.backoff_ms.empty()) retry_.sleeper(retry_.backoff_ms[idx]);
        }
    }

    if (cache_) cache_->put(key, req, resp);
    return resp;
}

int Gateway::judge_binary(const std::string& judge_model, const std::string& criterion_prompt,
                          const std::string& subject) {
    ChatRequest req;
    req.model_id = judge_model;
    req.messages = {{"system", criterion_prompt}, {"user", subject}};
    req.params = default_params();
    const ChatResponse resp = complete(req);
    const auto verdict = extract_binary_judgment(resp.text);
    if (!verdict) throw UnparseableJudgmentError(resp.text);
    return *verdict;
}

}  // namespace mqcic::llm

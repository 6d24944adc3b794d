#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "xling/corpus/record.hpp"
#include "xling/error.hpp"
#include "xling/inference/endpoint.hpp"
#include "xling/inference/prompt.hpp"
#include "xling/inference/record.hpp"
#include "xling/text.hpp"

namespace xling::inference {

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

using Sleeper = std::function<void(std::chrono::milliseconds)>;

inline void real_sleep(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

// Exponential backoff with multiplicative jitter; the jitter draw is seeded
// per item so schedules are reproducible.
struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds base_delay{250};
    double multiplier = 2.0;
    std::chrono::milliseconds max_delay{8000};
    double jitter = 0.5;  // delay scaled by a factor in [1 - jitter/2, 1 + jitter/2)

    // Delay after failed attempt `attempt` (1-based).
    std::chrono::milliseconds delay(int attempt, std::uint64_t seed) const {
        double d = static_cast<double>(base_delay.count()) * std::pow(multiplier, attempt - 1);
        d = std::min(d, static_cast<double>(max_delay.count()));
        std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(attempt));
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        return std::chrono::milliseconds(static_cast<std::int64_t>(d * (1.0 - jitter / 2 + jitter * u)));
    }

    void validate() const {
        if (max_attempts < 1) throw ConfigError("retry policy needs at least one attempt");
        if (multiplier < 1.0 || jitter < 0.0 || jitter > 1.0) throw ConfigError("invalid retry policy");
    }
};

struct CallOptions {
    std::string model;  // model identifier sent to the endpoint
    RetryPolicy retry{};
    Sleeper sleeper = real_sleep;
    bool use_translation = false;  // classify the translated text when a record has one
};

namespace detail {

struct AttemptOutcome {
    ChatResponse response;
    int attempts = 0;
};

// Issues one request per attempt until `accept` returns without throwing
// UnparseableResponse. Throws TransportError or UnparseableResponse from the
// last attempt once the budget is spent.
template <typename Accept>
auto with_retries(ChatEndpoint& ep, const ChatRequest& req, const CallOptions& opt, std::uint64_t seed,
                  Accept&& accept, std::string* last_raw, int* attempts_out) {
    opt.retry.validate();
    for (int attempt = 1;; ++attempt) {
        *attempts_out = attempt;
        try {
            ChatResponse resp = ep.complete(req);
            *last_raw = resp.content;
            return accept(resp);
        } catch (const TransportError&) {
            last_raw->clear();
            if (attempt >= opt.retry.max_attempts) throw;
        } catch (const UnparseableResponse&) {
            if (attempt >= opt.retry.max_attempts) throw;
        }
        if (opt.sleeper) opt.sleeper(opt.retry.delay(attempt, seed));
    }
}

} // namespace detail

// Classifies one record. Unparseable replies that exhaust the retry budget
// come back as a FailureRecord; exhausted transport failures throw.
inline ResultEntry classify(ChatEndpoint& ep, const corpus::TweetRecord& r, ModelVariant variant,
                            const CallOptions& opt = {}) {
    const bool translated = opt.use_translation && r.translated_text.has_value();
    ChatRequest req{opt.model, build_prompt(r, Task::classify, opt.use_translation), 0.0};
    std::string raw;
    int attempts = 0;
    try {
        return detail::with_retries(
            ep, req, opt, fnv1a64(r.id), [&](const ChatResponse& resp) -> ResultEntry {
                PredictionRecord p;
                p.tweet_id = r.id;
                p.variant = variant;
                p.predicted = parse_label(resp.content);
                p.gold = r.label;
                p.correct = p.predicted == p.gold;
                p.raw_response = resp.content;
                p.input_tokens = resp.prompt_tokens.value_or(count_tokens(req.messages));
                p.output_tokens = resp.completion_tokens.value_or(count_tokens(resp.content));
                p.prompt_version = std::string(kClassifyPromptVersion);
                p.translated = translated;
                p.attempts = attempts;
                return p;
            },
            &raw, &attempts);
    } catch (const UnparseableResponse& e) {
        return FailureRecord{r.id, variant, FailureKind::unparseable, e.what(), raw,
                             std::string(kClassifyPromptVersion), attempts};
    }
}

struct TranslationRecord {
    std::string tweet_id;
    std::string translated_text;
    std::string model;
    std::string prompt_version;
    int attempts = 1;

    bool operator==(const TranslationRecord&) const = default;
};

using TranslationEntry = std::variant<TranslationRecord, FailureRecord>;

// Translates a non-English record into English. Quality stays unknown until a
// human assesses it.
inline TranslationEntry translate(ChatEndpoint& ep, const corpus::TweetRecord& r, const CallOptions& opt = {}) {
    if (r.language == Language::en) throw DataError("record '" + r.id + "' is already English");
    ChatRequest req{opt.model, build_prompt(r, Task::translate), 0.0};
    std::string raw;
    int attempts = 0;
    try {
        return detail::with_retries(
            ep, req, opt, fnv1a64(r.id), [&](const ChatResponse& resp) -> TranslationEntry {
                const auto text = text::trim(resp.content);
                if (text.empty()) throw UnparseableResponse("empty translation");
                return TranslationRecord{r.id, std::string(text), opt.model, std::string(kTranslatePromptVersion),
                                         attempts};
            },
            &raw, &attempts);
    } catch (const UnparseableResponse& e) {
        // Translation failures carry the English variant tag; the field is unused for this task.
        return FailureRecord{r.id, ModelVariant::English, FailureKind::unparseable, e.what(), raw,
                             std::string(kTranslatePromptVersion), attempts};
    }
}

inline corpus::TweetRecord apply_translation(corpus::TweetRecord r, const TranslationRecord& t) {
    r.translated_text = t.translated_text;
    r.translation_quality = TranslationQuality::unknown;
    return r;
}

inline nlohmann::ordered_json translation_to_json(const TranslationEntry& e) {
    if (const auto* t = std::get_if<TranslationRecord>(&e)) {
        nlohmann::ordered_json j;
        j["id"] = t->tweet_id;
        j["status"] = "ok";
        j["translated_text"] = t->translated_text;
        j["quality"] = "unknown";
        j["model"] = t->model;
        j["prompt_version"] = t->prompt_version;
        j["attempts"] = t->attempts;
        return j;
    }
    auto j = to_json(ResultEntry(std::get<FailureRecord>(e)));
    j.erase("variant");
    return j;
}

inline TranslationEntry translation_from_json(const nlohmann::json& j) {
    try {
        if (j.at("status").get<std::string>() == "ok")
            return TranslationRecord{j.at("id").get<std::string>(), j.at("translated_text").get<std::string>(),
                                     j.value("model", ""), j.value("prompt_version", ""), j.value("attempts", 1)};
        auto copy = j;
        copy["variant"] = "English";
        return std::get<FailureRecord>(entry_from_json(copy));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed translation entry: ") + e.what());
    }
}

} // namespace xling::inference

#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "xling/error.hpp"
#include "xling/types.hpp"

namespace xling::inference {

// One successful classification of one record by one variant.
struct PredictionRecord {
    std::string tweet_id;
    ModelVariant variant = ModelVariant::English;
    Stance predicted = Stance::neutral;
    Stance gold = Stance::neutral;
    bool correct = false;
    std::string raw_response;
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;
    std::string prompt_version;
    bool translated = false;  // the translated text was sent instead of the original
    int attempts = 1;

    bool operator==(const PredictionRecord&) const = default;
};

enum class FailureKind { unparseable, transport };

// An item the campaign gave up on after exhausting its retries.
struct FailureRecord {
    std::string tweet_id;
    ModelVariant variant = ModelVariant::English;
    FailureKind kind = FailureKind::unparseable;
    std::string detail;
    std::string raw_response;  // last reply, empty for transport failures
    std::string prompt_version;
    int attempts = 0;

    bool operator==(const FailureRecord&) const = default;
};

using ResultEntry = std::variant<PredictionRecord, FailureRecord>;

inline const std::string& entry_id(const ResultEntry& e) {
    return std::visit([](const auto& r) -> const std::string& { return r.tweet_id; }, e);
}

// One log line. Key order is fixed so identical results serialize to identical bytes.
inline nlohmann::ordered_json to_json(const ResultEntry& e) {
    nlohmann::ordered_json j;
    if (const auto* p = std::get_if<PredictionRecord>(&e)) {
        j["id"] = p->tweet_id;
        j["variant"] = std::string(to_string(p->variant));
        j["status"] = "ok";
        j["predicted"] = std::string(to_string(p->predicted));
        j["gold"] = std::string(to_string(p->gold));
        j["correct"] = p->correct;
        j["raw"] = p->raw_response;
        j["input_tokens"] = p->input_tokens;
        j["output_tokens"] = p->output_tokens;
        j["prompt_version"] = p->prompt_version;
        j["translated"] = p->translated;
        j["attempts"] = p->attempts;
    } else {
        const auto& f = std::get<FailureRecord>(e);
        j["id"] = f.tweet_id;
        j["variant"] = std::string(to_string(f.variant));
        j["status"] = f.kind == FailureKind::unparseable ? "parse_failure" : "transport_failure";
        j["detail"] = f.detail;
        j["raw"] = f.raw_response;
        j["prompt_version"] = f.prompt_version;
        j["attempts"] = f.attempts;
    }
    return j;
}

inline ResultEntry entry_from_json(const nlohmann::json& j) {
    try {
        const auto status = j.at("status").get<std::string>();
        if (status == "ok") {
            PredictionRecord p;
            p.tweet_id = j.at("id").get<std::string>();
            p.variant = parse_enum<ModelVariant>(j.at("variant").get<std::string>());
            p.predicted = parse_enum<Stance>(j.at("predicted").get<std::string>());
            p.gold = parse_enum<Stance>(j.at("gold").get<std::string>());
            p.correct = j.at("correct").get<bool>();
            if (p.correct != (p.predicted == p.gold)) throw DataError("correct flag disagrees with labels");
            p.raw_response = j.value("raw", "");
            p.input_tokens = j.value("input_tokens", std::uint64_t{0});
            p.output_tokens = j.value("output_tokens", std::uint64_t{0});
            p.prompt_version = j.value("prompt_version", "");
            p.translated = j.value("translated", false);
            p.attempts = j.value("attempts", 1);
            return p;
        }
        FailureRecord f;
        if (status == "parse_failure") f.kind = FailureKind::unparseable;
        else if (status == "transport_failure") f.kind = FailureKind::transport;
        else throw DataError("unknown result status '" + status + "'");
        f.tweet_id = j.at("id").get<std::string>();
        f.variant = parse_enum<ModelVariant>(j.at("variant").get<std::string>());
        f.detail = j.value("detail", "");
        f.raw_response = j.value("raw", "");
        f.prompt_version = j.value("prompt_version", "");
        f.attempts = j.value("attempts", 0);
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed result entry: ") + e.what());
    }
}

} // namespace xling::inference

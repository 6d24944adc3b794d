#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xling/error.hpp"
#include "xling/inference/prompt.hpp"

namespace xling::inference {

struct ChatRequest {
    std::string model;
    std::vector<Message> messages;
    double temperature = 0.0;
};

struct ChatResponse {
    std::string content;
    std::optional<std::uint64_t> prompt_tokens;
    std::optional<std::uint64_t> completion_tokens;
};

// A chat-completion service. Implementations must tolerate concurrent calls
// and report failures to deliver a reply as TransportError.
class ChatEndpoint {
public:
    virtual ~ChatEndpoint() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// Wraps a callable; used for stubs and in-process models.
class FunctionEndpoint : public ChatEndpoint {
public:
    using Fn = std::function<ChatResponse(const ChatRequest&)>;
    explicit FunctionEndpoint(Fn fn) : fn_(std::move(fn)) {}
    ChatResponse complete(const ChatRequest& request) override { return fn_(request); }

private:
    Fn fn_;
};

inline nlohmann::ordered_json request_body(const ChatRequest& r) {
    nlohmann::ordered_json j;
    j["model"] = r.model;
    j["messages"] = nlohmann::ordered_json::array();
    for (const auto& m : r.messages) j["messages"].push_back({{"role", m.role}, {"content", m.content}});
    j["temperature"] = r.temperature;
    return j;
}

inline ChatRequest request_from_body(const nlohmann::json& j) {
    ChatRequest r;
    r.model = j.value("model", "");
    for (const auto& m : j.at("messages")) r.messages.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
    r.temperature = j.value("temperature", 0.0);
    return r;
}

// Reads choices[0].message.content and, when present, usage token counts.
inline ChatResponse parse_response_body(const std::string& body) {
    try {
        const auto j = nlohmann::json::parse(body);
        ChatResponse r;
        r.content = j.at("choices").at(0).at("message").at("content").get<std::string>();
        if (j.contains("usage") && j["usage"].is_object()) {
            const auto& u = j["usage"];
            if (u.contains("prompt_tokens")) r.prompt_tokens = u["prompt_tokens"].get<std::uint64_t>();
            if (u.contains("completion_tokens")) r.completion_tokens = u["completion_tokens"].get<std::uint64_t>();
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("malformed completion body: ") + e.what());
    }
}

inline nlohmann::ordered_json response_body(const std::string& content) {
    nlohmann::ordered_json j;
    j["choices"] = nlohmann::ordered_json::array();
    j["choices"].push_back({{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}});
    return j;
}

} // namespace xling::inference

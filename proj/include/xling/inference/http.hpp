#pragma once

#include <cstdlib>
#include <string>

#include <httplib.h>

#include "xling/error.hpp"
#include "xling/inference/endpoint.hpp"

namespace xling::inference {

inline constexpr const char* kDefaultTokenEnv = "XLING_API_KEY";

// Chat-completion over HTTP(S). `base_url` is scheme://host[:port][/prefix];
// requests go to <prefix>/v1/chat/completions. The bearer token, if any, is
// read from the environment variable `token_env` at construction.
class HttpChatEndpoint : public ChatEndpoint {
public:
    explicit HttpChatEndpoint(std::string base_url, std::string token_env = kDefaultTokenEnv,
                              int timeout_seconds = 60)
        : timeout_(timeout_seconds) {
        const auto scheme_end = base_url.find("://");
        if (scheme_end == std::string::npos) throw ConfigError("endpoint '" + base_url + "' lacks a scheme");
        const auto scheme = base_url.substr(0, scheme_end);
        if (scheme != "http" && scheme != "https")
            throw ConfigError("endpoint scheme must be http or https, got '" + scheme + "'");
        const auto path_start = base_url.find('/', scheme_end + 3);
        origin_ = base_url.substr(0, path_start);
        prefix_ = path_start == std::string::npos ? "" : base_url.substr(path_start);
        while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
        if (origin_.size() <= scheme_end + 3) throw ConfigError("endpoint '" + base_url + "' lacks a host");
        if (const char* tok = std::getenv(token_env.c_str()); tok && *tok) token_ = tok;
    }

    std::string path() const { return prefix_ + "/v1/chat/completions"; }

    ChatResponse complete(const ChatRequest& request) override {
        // A client per call keeps concurrent callers independent.
        httplib::Client cli(origin_);
        cli.set_connection_timeout(timeout_, 0);
        cli.set_read_timeout(timeout_, 0);
        cli.set_write_timeout(timeout_, 0);
        httplib::Headers headers;
        if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
        auto res = cli.Post(path(), headers, request_body(request).dump(), "application/json");
        if (!res) throw TransportError("request to " + origin_ + " failed: " + httplib::to_string(res.error()));
        if (res->status < 200 || res->status >= 300)
            throw TransportError("endpoint returned HTTP " + std::to_string(res->status));
        return parse_response_body(res->body);
    }

private:
    std::string origin_;
    std::string prefix_;
    std::string token_;
    int timeout_;
};

} // namespace xling::inference

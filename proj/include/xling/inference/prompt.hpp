#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "xling/corpus/record.hpp"
#include "xling/error.hpp"
#include "xling/text.hpp"
#include "xling/types.hpp"

namespace xling::inference {

struct Message {
    std::string role;
    std::string content;

    bool operator==(const Message&) const = default;
};

enum class Task { classify, translate };

inline constexpr std::string_view kClassifyPromptVersion = "classify-v1";
inline constexpr std::string_view kTranslatePromptVersion = "translate-v1";

inline constexpr std::string_view kClassifySystem =
    "You are annotating tweets about immigration. Classify the tweet into exactly one of four labels: "
    "neutral (about immigration, no clear stance), pro-immigration (in favour of immigration), "
    "anti-immigration (against immigration), unrelated (not about immigration). "
    "Answer with the label only.";
inline constexpr std::string_view kClassifyUserPrefix = "Tweet: ";
inline constexpr std::string_view kClassifyUserSuffix = "\nLabel:";

inline constexpr std::string_view kTranslateSystem =
    "Translate the following tweet into English. Reply with the English translation only, "
    "without notes or quotation marks.";

inline std::string_view prompt_version(Task t) {
    return t == Task::classify ? kClassifyPromptVersion : kTranslatePromptVersion;
}

// Approximate token count: ceil(code points / 4). Exact counts supplied by an
// endpoint take precedence wherever they are available.
inline std::uint64_t count_tokens(std::string_view utf8) {
    return (text::code_point_count(utf8) + 3) / 4;
}

inline std::uint64_t count_tokens(const std::vector<Message>& messages) {
    std::size_t cp = 0;
    for (const auto& m : messages) cp += text::code_point_count(m.content);
    return (cp + 3) / 4;
}

// Tokens contributed by the classify template itself, excluding the tweet.
inline std::uint64_t classify_template_tokens() {
    return count_tokens(std::string(kClassifySystem) + std::string(kClassifyUserPrefix) +
                        std::string(kClassifyUserSuffix));
}

// The text sent for a record: the translation when requested and available.
inline const std::string& input_text(const corpus::TweetRecord& r, bool use_translation) {
    return use_translation && r.translated_text ? *r.translated_text : r.text;
}

inline std::vector<Message> build_prompt(std::string_view content, Task task) {
    if (text::trim(content).empty()) throw DataError("cannot build a prompt for empty text");
    if (task == Task::classify)
        return {{"system", std::string(kClassifySystem)},
                {"user", std::string(kClassifyUserPrefix) + std::string(content) + std::string(kClassifyUserSuffix)}};
    return {{"system", std::string(kTranslateSystem)}, {"user", std::string(content)}};
}

inline std::vector<Message> build_prompt(const corpus::TweetRecord& r, Task task, bool use_translation = false) {
    return build_prompt(task == Task::classify ? input_text(r, use_translation) : r.text, task);
}

namespace detail {

inline bool ascii_word_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && (std::isalnum(u) || c == '_');
}

struct LabelToken {
    std::string_view token;
    Stance stance;
};

inline constexpr std::array<LabelToken, 6> kLabelTokens{{
    {"pro-immigration", Stance::pro},
    {"anti-immigration", Stance::anti},
    {"neutral", Stance::neutral},
    {"unrelated", Stance::unrelated},
    {"pro", Stance::pro},
    {"anti", Stance::anti},
}};

} // namespace detail

// First label token in the reply, compared case-insensitively on whole ASCII
// words; the longer token wins when two start at the same position.
inline Stance parse_label(std::string_view raw) {
    const std::string s = text::ascii_lower(raw);
    std::size_t best_pos = std::string::npos, best_len = 0;
    Stance best = Stance::neutral;
    for (const auto& [tok, stance] : detail::kLabelTokens) {
        for (std::size_t pos = s.find(tok); pos != std::string::npos; pos = s.find(tok, pos + 1)) {
            const bool left = pos == 0 || !detail::ascii_word_char(s[pos - 1]);
            const std::size_t end = pos + tok.size();
            const bool right = end == s.size() || !detail::ascii_word_char(s[end]);
            if (!left || !right) continue;
            if (pos < best_pos || (pos == best_pos && tok.size() > best_len)) {
                best_pos = pos;
                best_len = tok.size();
                best = stance;
            }
            break;
        }
    }
    if (best_pos == std::string::npos)
        throw UnparseableResponse("no label in reply '" + std::string(raw.substr(0, 80)) + "'");
    return best;
}

} // namespace xling::inference

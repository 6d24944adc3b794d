#pragma once

#include <optional>
#include <string>

#include "xling/error.hpp"
#include "xling/types.hpp"

namespace xling::corpus {

// One annotated text. `split` is empty until a split has been assigned.
struct TweetRecord {
    std::string id;
    std::string text;
    Language language = Language::en;
    Stance label = Stance::neutral;
    std::optional<Split> split;
    TranslationQuality translation_quality = TranslationQuality::not_translated;
    std::optional<std::string> translated_text;

    bool operator==(const TweetRecord&) const = default;
};

// Throws DataError if the record breaks a field invariant.
inline void validate(const TweetRecord& r, std::size_t row = 0) {
    if (r.id.empty()) throw DataError("empty id", row);
    const bool untranslated = r.translation_quality == TranslationQuality::not_translated;
    if (untranslated && r.translated_text)
        throw DataError("record '" + r.id + "' is not_translated but carries a translation", row);
    if (!untranslated && !r.translated_text)
        throw DataError("record '" + r.id + "' has translation quality '" +
                            std::string(to_string(r.translation_quality)) + "' but no translated text",
                        row);
    if (r.language == Language::en && !untranslated)
        throw DataError("English record '" + r.id + "' cannot be translated", row);
}

} // namespace xling::corpus

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "xling/error.hpp"

namespace xling {

enum class Language { en, es, tr, ar, it, id, hi, hu, pl, pt, fr, de, ko };

enum class Stance { neutral, pro, anti, unrelated };

enum class Split { train, test, additional_test };

enum class TranslationQuality { not_translated, good, bad, unknown };

// The four fine-tuned classifiers compared throughout the analysis.
enum class ModelVariant { English, Spanish, EnglishSpanish, Multilanguage };

template <typename E>
struct EnumTokens;

template <>
struct EnumTokens<Language> {
    static constexpr std::string_view kind = "language";
    static constexpr std::array<std::pair<Language, std::string_view>, 13> table{{
        {Language::en, "en"}, {Language::es, "es"}, {Language::tr, "tr"}, {Language::ar, "ar"},
        {Language::it, "it"}, {Language::id, "id"}, {Language::hi, "hi"}, {Language::hu, "hu"},
        {Language::pl, "pl"}, {Language::pt, "pt"}, {Language::fr, "fr"}, {Language::de, "de"},
        {Language::ko, "ko"},
    }};
};

template <>
struct EnumTokens<Stance> {
    static constexpr std::string_view kind = "label";
    static constexpr std::array<std::pair<Stance, std::string_view>, 4> table{{
        {Stance::neutral, "neutral"},
        {Stance::pro, "pro"},
        {Stance::anti, "anti"},
        {Stance::unrelated, "unrelated"},
    }};
};

template <>
struct EnumTokens<Split> {
    static constexpr std::string_view kind = "split";
    static constexpr std::array<std::pair<Split, std::string_view>, 3> table{{
        {Split::train, "train"},
        {Split::test, "test"},
        {Split::additional_test, "additional_test"},
    }};
};

template <>
struct EnumTokens<TranslationQuality> {
    static constexpr std::string_view kind = "translation quality";
    static constexpr std::array<std::pair<TranslationQuality, std::string_view>, 4> table{{
        {TranslationQuality::not_translated, "not_translated"},
        {TranslationQuality::good, "good"},
        {TranslationQuality::bad, "bad"},
        {TranslationQuality::unknown, "unknown"},
    }};
};

template <>
struct EnumTokens<ModelVariant> {
    static constexpr std::string_view kind = "model variant";
    static constexpr std::array<std::pair<ModelVariant, std::string_view>, 4> table{{
        {ModelVariant::English, "English"},
        {ModelVariant::Spanish, "Spanish"},
        {ModelVariant::EnglishSpanish, "EnglishSpanish"},
        {ModelVariant::Multilanguage, "Multilanguage"},
    }};
};

template <typename E>
constexpr std::string_view to_string(E value) {
    for (const auto& [v, token] : EnumTokens<E>::table)
        if (v == value) return token;
    return "?";
}

template <typename E>
constexpr std::optional<E> try_parse(std::string_view token) {
    for (const auto& [v, t] : EnumTokens<E>::table)
        if (t == token) return v;
    return std::nullopt;
}

template <typename E>
E parse_enum(std::string_view token) {
    if (auto v = try_parse<E>(token)) return *v;
    throw DataError("unknown " + std::string(EnumTokens<E>::kind) + " '" + std::string(token) + "'");
}

template <typename E>
constexpr auto all_values() {
    std::array<E, EnumTokens<E>::table.size()> out{};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = EnumTokens<E>::table[i].first;
    return out;
}

// English display names, used in rendered tables.
constexpr std::string_view language_name(Language lang) {
    switch (lang) {
        case Language::en: return "English";
        case Language::es: return "Spanish";
        case Language::tr: return "Turkish";
        case Language::ar: return "Arabic";
        case Language::it: return "Italian";
        case Language::id: return "Indonesian";
        case Language::hi: return "Hindi";
        case Language::hu: return "Hungarian";
        case Language::pl: return "Polish";
        case Language::pt: return "Portuguese";
        case Language::fr: return "French";
        case Language::de: return "German";
        case Language::ko: return "Korean";
    }
    return "?";
}

} // namespace xling

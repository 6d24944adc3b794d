#pragma once

#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "xling/error.hpp"
#include "xling/text.hpp"
#include "xling/types.hpp"

namespace xling::corpus {

// Sampling keywords per language. Terms are plain words, stems or hashtags;
// a text matches a term when the case-folded term occurs anywhere in the
// case-folded text.
class SearchTermTable {
public:
    SearchTermTable() = default;

    explicit SearchTermTable(std::map<Language, std::vector<std::string>> terms) : terms_(std::move(terms)) {
        for (Language lang : all_values<Language>()) {
            auto it = terms_.find(lang);
            if (it == terms_.end() || it->second.empty())
                throw ConfigError("search-term table has no terms for language '" +
                                  std::string(to_string(lang)) + "'");
            for (const auto& t : it->second)
                if (text::fold_case(text::trim(t)).empty())
                    throw ConfigError("empty search term for language '" + std::string(to_string(lang)) + "'");
        }
        for (const auto& [lang, list] : terms_) {
            auto& folded = folded_[lang];
            for (const auto& t : list) folded.push_back(text::fold_case(t));
        }
    }

    const std::vector<std::string>& terms(Language lang) const {
        auto it = terms_.find(lang);
        if (it == terms_.end())
            throw ConfigError("language '" + std::string(to_string(lang)) + "' not in search-term table");
        return it->second;
    }

    const std::vector<std::string>& folded_terms(Language lang) const {
        terms(lang);
        return folded_.at(lang);
    }

    const std::map<Language, std::vector<std::string>>& all() const noexcept { return terms_; }

    bool operator==(const SearchTermTable& o) const { return terms_ == o.terms_; }

private:
    std::map<Language, std::vector<std::string>> terms_;
    std::map<Language, std::vector<std::string>> folded_;
};

// The shipped keyword lists, in published order.
inline SearchTermTable default_search_terms() {
    using L = Language;
    return SearchTermTable({
        {L::en,
         {"immigration", "migration", "refugee", "migrant", "illegal immigration", "border control",
          "migration crisis", "foreigner", "asylum seeker", "asylee", "#refugee", "#migrant", "#immigration"}},
        {L::es, {"migrante", "refugiad", "inmigrant", "migración", "inmigración", "#inmigracion", "#migrantes"}},
        {L::ar,
         {"المهجرة", "أزمة الحدود", "مراقبة شرعية", "غير هجرة مهاجر", "لاجئ", "هجرة", "لجوء طالب أجنبي",
          "#هجرة", "#لاجئون"}},
        {L::fr,
         {"immigration", "migrant", "immigrant", "immigré", "réfugié", "clandestin", "immigrants illégaux",
          "immigrants", "migrants", "#immigration", "#migrants"}},
        {L::de,
         {"Einwanderung", "Zuwanderung", "Migrant", "Einwanderer", "Zuwanderer", "Flüchtling",
          "illegale Einwanderer", "Grenzkontrolle", "Asylant", "Asylbewerber", "Asylsuchende", "Asylwerber",
          "Menschenhandel", "Schleuser", "Flüchtlingskrise", "#Einwanderung", "#Migranten"}},
        {L::hi,
         {"आव्रजन", "प्रवास", "शरणार्थी", "प्रवासी", "अवैध आव्रजन", "सीमा नियंत्रण", "प्रवास संकट", "विदेशी",
          "शरणार्थी आवेदनकर्ता", "#शरणार्थी", "#आव्रजन"}},
        {L::hu,
         {"bevándorlás", "migráció", "menekült", "migráns", "illegális bevándorlás", "határellenőrzés",
          "migrációs válság", "külföldi", "menedékkérő", "menedékjogot kérő", "bevándorló", "#menekültek",
          "#bevándorlás"}},
        {L::id,
         {"imigrasi", "migrasi", "pengungsi", "migran", "imigrasi ilegal", "kontrol perbatasan", "krisis migrasi",
          "orang asing", "pencari suaka", "#pengungsi", "#imigrasi"}},
        {L::it,
         {"immigra", "migrant", "rifugiat", "clandestin", "invasione", "sbarchi", "immigrazione clandestina",
          "#immigrazione", "#migranti"}},
        {L::pl,
         {"imigracja", "migracja", "uchodźc", "migrant", "nielegalna imigracja", "kontrola graniczna",
          "kryzys migracyjny", "cudzoziemiec", "osoba ubiegająca się o azyl", "azylant", "#uchodźcy",
          "#imigracja"}},
        {L::pt, {"Imigração", "migração", "migrante", "imigrante", "refugiado", "asilad", "#imigração", "#migrantes"}},
        {L::tr, {"göç", "göçmen", "mülteci", "mülteciler", "yasa dışı göçmenler", "göçmenler", "#göç", "#göçmenler"}},
        {L::ko,
         {"이민", "이주", "난민", "난민들", "이주자", "이주민", "불법 이민", "국경 통제", "이주 위기", "외국인",
          "망명 신청자", "망명자", "탈북자", "북한이탈주민", "탈북민", "새터민", "#난민", "#이민"}},
    });
}

// Config format: a JSON object keyed by language code, values are term arrays.
inline SearchTermTable search_terms_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("search-term table must be a JSON object");
    std::map<Language, std::vector<std::string>> terms;
    for (const auto& [key, value] : j.items()) {
        auto lang = try_parse<Language>(key);
        if (!lang) throw ConfigError("unknown language '" + key + "' in search-term table");
        if (!value.is_array()) throw ConfigError("terms for '" + key + "' must be an array");
        terms[*lang] = value.get<std::vector<std::string>>();
    }
    return SearchTermTable(std::move(terms));
}

inline nlohmann::ordered_json search_terms_to_json(const SearchTermTable& table) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (Language lang : all_values<Language>()) j[std::string(to_string(lang))] = table.terms(lang);
    return j;
}

inline SearchTermTable load_search_terms(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open search-term table '" + path + "'");
    try {
        return search_terms_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed search-term table '" + path + "': " + e.what());
    }
}

// Every term for `lang` found in the case-folded text, in table order.
// An empty result means the text would not have been sampled.
inline std::vector<std::string> match_search_terms(std::string_view text, Language lang,
                                                   const SearchTermTable& table) {
    const auto& raw = table.terms(lang);
    const auto& folded = table.folded_terms(lang);
    const std::string haystack = text::fold_case(text);
    std::vector<std::string> hits;
    for (std::size_t i = 0; i < folded.size(); ++i)
        if (haystack.find(folded[i]) != std::string::npos) hits.push_back(raw[i]);
    return hits;
}

} // namespace xling::corpus

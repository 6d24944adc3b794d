#pragma once

#include <array>
#include <cstdio>
#include <map>
#include <ostream>

#include "xling/corpus/record.hpp"

namespace xling::corpus {

struct LanguageCounts {
    std::size_t total = 0;
    std::size_t unsplit = 0;
    std::array<std::size_t, 3> by_split{};  // indexed by Split
    std::array<std::size_t, 4> by_label{};  // indexed by Stance
    double share_unrelated = 0.0;

    std::size_t split_count(Split s) const { return by_split[static_cast<std::size_t>(s)]; }
    std::size_t label_count(Stance s) const { return by_label[static_cast<std::size_t>(s)]; }
};

struct CorpusSummary {
    std::map<Language, LanguageCounts> languages;
    std::size_t total = 0;

    // 0 for languages absent from the corpus.
    double share_unrelated(Language lang) const {
        auto it = languages.find(lang);
        return it == languages.end() ? 0.0 : it->second.share_unrelated;
    }
};

inline CorpusSummary summarize(const std::vector<TweetRecord>& corpus) {
    CorpusSummary s;
    for (const auto& r : corpus) {
        auto& c = s.languages[r.language];
        ++c.total;
        if (r.split) ++c.by_split[static_cast<std::size_t>(*r.split)];
        else ++c.unsplit;
        ++c.by_label[static_cast<std::size_t>(r.label)];
        ++s.total;
    }
    for (auto& [lang, c] : s.languages)
        c.share_unrelated = static_cast<double>(c.label_count(Stance::unrelated)) / static_cast<double>(c.total);
    return s;
}

inline void write_summary(std::ostream& out, const CorpusSummary& s) {
    out << "language\ttotal\ttrain\ttest\tadditional_test\tunsplit\tneutral\tpro\tanti\tunrelated\tshare_unrelated\n";
    for (const auto& [lang, c] : s.languages) {
        out << to_string(lang) << '\t' << c.total << '\t' << c.split_count(Split::train) << '\t'
            << c.split_count(Split::test) << '\t' << c.split_count(Split::additional_test) << '\t' << c.unsplit;
        for (Stance st : all_values<Stance>()) out << '\t' << c.label_count(st);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", c.share_unrelated);
        out << '\t' << buf << '\n';
    }
}

} // namespace xling::corpus

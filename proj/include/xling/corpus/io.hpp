#pragma once

#include <array>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "xling/corpus/record.hpp"
#include "xling/csv.hpp"
#include "xling/error.hpp"

namespace xling::corpus {

inline constexpr std::array<std::string_view, 7> kCorpusColumns{
    "id", "text", "language", "label", "split", "translation_quality", "translated_text"};

// Reads a corpus stream. The header decides the delimiter: tab if the header
// line contains one, comma otherwise. Columns are located by name and
// translated_text may be omitted. Errors carry the physical line number.
inline std::vector<TweetRecord> parse_corpus(std::istream& in) {
    std::vector<TweetRecord> out;
    std::string header_line;
    while (std::getline(in, header_line)) {
        if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
        if (!header_line.empty()) break;
    }
    if (header_line.empty()) return out;

    const char delim = header_line.find('\t') != std::string::npos ? '\t' : ',';
    std::istringstream hs(header_line);
    auto header = csv::Reader(hs, delim).next().value();

    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!col.emplace(header[i], i).second)
            throw DataError("duplicate column '" + header[i] + "'", 1);
    }
    for (std::size_t i = 0; i + 1 < kCorpusColumns.size(); ++i)
        if (!col.contains(std::string(kCorpusColumns[i])))
            throw DataError("missing column '" + std::string(kCorpusColumns[i]) + "'", 1);

    csv::Reader reader(in, delim, 1);
    std::unordered_set<std::string> seen;
    while (auto fields = reader.next()) {
        const std::size_t line = reader.record_line();
        if (fields->size() != header.size())
            throw DataError("expected " + std::to_string(header.size()) + " fields, got " +
                                std::to_string(fields->size()),
                            line);
        auto get = [&](std::string_view name) -> const std::string& {
            return (*fields)[col.at(std::string(name))];
        };
        TweetRecord r;
        try {
            r.id = get("id");
            r.text = get("text");
            r.language = parse_enum<Language>(get("language"));
            r.label = parse_enum<Stance>(get("label"));
            if (!get("split").empty()) r.split = parse_enum<Split>(get("split"));
            if (!get("translation_quality").empty())
                r.translation_quality = parse_enum<TranslationQuality>(get("translation_quality"));
            if (col.contains("translated_text") && !get("translated_text").empty())
                r.translated_text = get("translated_text");
        } catch (const DataError& e) {
            throw DataError(e.what(), line);
        }
        validate(r, line);
        if (!seen.insert(r.id).second) throw DataError("duplicate id '" + r.id + "'", line);
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<TweetRecord> load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open corpus file '" + path + "'");
    return parse_corpus(in);
}

inline void write_corpus(std::ostream& out, const std::vector<TweetRecord>& records, char delim = ',') {
    std::vector<std::string> header(kCorpusColumns.begin(), kCorpusColumns.end());
    csv::write_row(out, header, delim);
    for (const auto& r : records) {
        csv::write_row(out,
                       {r.id, r.text, std::string(to_string(r.language)), std::string(to_string(r.label)),
                        r.split ? std::string(to_string(*r.split)) : std::string(),
                        std::string(to_string(r.translation_quality)), r.translated_text.value_or("")},
                       delim);
    }
}

inline void save_corpus(const std::string& path, const std::vector<TweetRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write corpus file '" + path + "'");
    write_corpus(out, records);
}

} // namespace xling::corpus

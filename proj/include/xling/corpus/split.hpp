#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "xling/corpus/record.hpp"

namespace xling::corpus {

struct SplitResult {
    std::vector<TweetRecord> train;
    std::vector<TweetRecord> test;
};

namespace detail {

// Unbiased draw in [0, bound) from a fully specified engine, so shuffles are
// identical across standard library implementations.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
    std::uint64_t u;
    do u = rng(); while (u >= limit);
    return u % bound;
}

} // namespace detail

// Train size for n items: round-half-up of n * fraction.
inline std::size_t train_size(std::size_t n, double fraction) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 0.5));
}

// Per-language random split. Within each output, records keep their input
// order. Records that already carry a split are rejected unless `overwrite`.
inline SplitResult stratified_split(const std::vector<TweetRecord>& records, double train_fraction,
                                    std::uint64_t seed, bool overwrite = false) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train fraction must lie in (0, 1)");

    std::map<Language, std::vector<std::size_t>> by_lang;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].split && !overwrite)
            throw std::invalid_argument("record '" + records[i].id + "' already has a split");
        by_lang[records[i].language].push_back(i);
    }

    std::vector<bool> is_train(records.size(), false);
    for (auto& [lang, idx] : by_lang) {
        // One stream per language keeps each language's split independent of the others.
        std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(lang) + 1)));
        for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[detail::bounded(rng, i)]);
        const std::size_t k = train_size(idx.size(), train_fraction);
        for (std::size_t j = 0; j < k; ++j) is_train[idx[j]] = true;
    }

    SplitResult out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        TweetRecord r = records[i];
        r.split = is_train[i] ? Split::train : Split::test;
        (is_train[i] ? out.train : out.test).push_back(std::move(r));
    }
    return out;
}

// Splits only the records without a split; records already tagged (for
// example additional_test rows) pass through. Input order is preserved.
inline std::vector<TweetRecord> assign_splits(const std::vector<TweetRecord>& records, double train_fraction,
                                              std::uint64_t seed) {
    std::vector<TweetRecord> pending;
    for (const auto& r : records)
        if (!r.split) pending.push_back(r);
    auto parts = stratified_split(pending, train_fraction, seed);
    std::map<std::string, Split> assigned;
    for (const auto& r : parts.train) assigned[r.id] = Split::train;
    for (const auto& r : parts.test) assigned[r.id] = Split::test;

    std::vector<TweetRecord> out = records;
    for (auto& r : out)
        if (!r.split) r.split = assigned.at(r.id);
    return out;
}

// Training rows for each fine-tuned variant. Korean never enters training.
inline std::map<ModelVariant, std::vector<TweetRecord>> build_training_sets(const std::vector<TweetRecord>& corpus) {
    std::map<ModelVariant, std::vector<TweetRecord>> sets;
    for (ModelVariant v : all_values<ModelVariant>()) sets[v];
    for (const auto& r : corpus) {
        if (r.split != Split::train || r.language == Language::ko) continue;
        if (r.language == Language::en) {
            sets[ModelVariant::English].push_back(r);
            sets[ModelVariant::EnglishSpanish].push_back(r);
        } else if (r.language == Language::es) {
            sets[ModelVariant::Spanish].push_back(r);
            sets[ModelVariant::EnglishSpanish].push_back(r);
        }
        sets[ModelVariant::Multilanguage].push_back(r);
    }
    return sets;
}

} // namespace xling::corpus

#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "xling/corpus/record.hpp"
#include "xling/corpus/summary.hpp"
#include "xling/effects/spec.hpp"
#include "xling/error.hpp"
#include "xling/glm/design.hpp"
#include "xling/inference/record.hpp"

namespace xling::effects {

struct JoinedPrediction {
    const inference::PredictionRecord* prediction;
    const corpus::TweetRecord* record;
};

// Pairs each prediction with its corpus record. Throws DataError for unknown
// ids or a gold label that disagrees with the corpus.
inline std::vector<JoinedPrediction> join_predictions(const std::vector<inference::PredictionRecord>& predictions,
                                                      const std::vector<corpus::TweetRecord>& corpus) {
    std::unordered_map<std::string, const corpus::TweetRecord*> by_id;
    for (const auto& r : corpus) by_id.emplace(r.id, &r);
    std::vector<JoinedPrediction> out;
    out.reserve(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const auto& p = predictions[i];
        auto it = by_id.find(p.tweet_id);
        if (it == by_id.end()) throw DataError("prediction for unknown record '" + p.tweet_id + "'", i + 1);
        if (it->second->label != p.gold)
            throw DataError("prediction for '" + p.tweet_id + "' carries a gold label that disagrees with the corpus",
                            i + 1);
        out.push_back({&p, it->second});
    }
    return out;
}

// One regression row per prediction. additional_test rows count as test; the
// translation level is the record's quality only when the translation was sent.
inline std::vector<glm::Observation> build_observations(const std::vector<inference::PredictionRecord>& predictions,
                                                        const std::vector<corpus::TweetRecord>& corpus) {
    const auto summary = corpus::summarize(corpus);
    std::vector<glm::Observation> rows;
    rows.reserve(predictions.size());
    std::size_t i = 0;
    for (const auto& j : join_predictions(predictions, corpus)) {
        ++i;
        const auto& p = *j.prediction;
        const auto& r = *j.record;
        if (!r.split) throw DataError("record '" + r.id + "' has no split assignment", i);
        glm::Observation o;
        o.levels[kModel] = std::string(to_string(p.variant));
        o.levels[kLabel] = std::string(to_string(r.label));
        o.levels[kLanguage] = std::string(to_string(r.language));
        o.levels[kSplit] = *r.split == Split::train ? "train" : "test";
        o.levels[kQuality] = std::string(
            to_string(p.translated ? r.translation_quality : TranslationQuality::not_translated));
        o.covariates[kShareUnrelated] = summary.share_unrelated(r.language);
        o.response = p.correct ? 1.0 : 0.0;
        rows.push_back(std::move(o));
    }
    return rows;
}

} // namespace xling::effects

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <tuple>
#include <vector>

#include "xling/corpus/record.hpp"
#include "xling/effects/rows.hpp"
#include "xling/error.hpp"
#include "xling/glm/coefficients.hpp"
#include "xling/inference/record.hpp"
#include "xling/types.hpp"

namespace xling::effects {

enum class ShareProvenance { listed, below_threshold };

struct PretrainShare {
    double percent = 0.0;
    ShareProvenance provenance = ShareProvenance::listed;
};

class PretrainShareTable {
public:
    PretrainShareTable() = default;

    void set(Language l, PretrainShare s) {
        if (s.percent < 0.0) throw ConfigError("pretraining share must be non-negative");
        shares_[l] = s;
    }

    // Languages missing from the table were below the listing threshold.
    PretrainShare lookup(Language l) const {
        auto it = shares_.find(l);
        if (it == shares_.end()) return {0.0, ShareProvenance::below_threshold};
        return it->second;
    }

    const std::map<Language, PretrainShare>& entries() const noexcept { return shares_; }

private:
    std::map<Language, PretrainShare> shares_;
};

// LLaMA 2 pretraining language distribution, percent of tokens. Only
// languages listed at >= 0.005% appear; ar, tr and hi are below that.
inline PretrainShareTable default_pretrain_shares() {
    PretrainShareTable t;
    const std::pair<Language, double> listed[] = {
        {Language::en, 89.70}, {Language::de, 0.17}, {Language::fr, 0.16}, {Language::es, 0.13},
        {Language::it, 0.11},  {Language::pl, 0.09}, {Language::pt, 0.09}, {Language::ko, 0.06},
        {Language::id, 0.03},  {Language::hu, 0.03},
    };
    for (const auto& [l, p] : listed) t.set(l, {p, ShareProvenance::listed});
    for (auto l : {Language::ar, Language::tr, Language::hi}) t.set(l, {0.0, ShareProvenance::below_threshold});
    return t;
}

struct ShareGroup {
    Language language;
    ModelVariant variant;
    double share_percent = 0.0;
    bool below_threshold = false;
    std::size_t n = 0;
    std::size_t correct = 0;
    double mean_accuracy = 0.0;
};

struct TrendLine {
    double slope = 0.0;  // accuracy per percentage point of share
    double intercept = 0.0;
};

struct PretrainAnalysis {
    std::vector<ShareGroup> groups;  // ascending share, then language, then variant
    std::optional<TrendLine> trend;  // absent when every group has the same share
};

// Ordinary least squares of y on x.
inline std::optional<TrendLine> least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    if (x.empty()) return std::nullopt;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) return std::nullopt;
    const double b = sxy / sxx;
    return TrendLine{b, my - b * mx};
}

// Drops English text and unrelated gold labels, then averages correctness per
// (language, variant) and regresses the group means on pretraining share.
inline PretrainAnalysis accuracy_by_pretraining_share(const std::vector<inference::PredictionRecord>& predictions,
                                                      const std::vector<corpus::TweetRecord>& corpus,
                                                      const PretrainShareTable& shares) {
    std::map<std::pair<Language, ModelVariant>, std::pair<std::size_t, std::size_t>> tally;
    for (const auto& j : join_predictions(predictions, corpus)) {
        if (j.record->language == Language::en || j.record->label == Stance::unrelated) continue;
        auto& [n, c] = tally[{j.record->language, j.prediction->variant}];
        ++n;
        if (j.prediction->correct) ++c;
    }
    if (tally.empty()) throw DataError("no predictions left after removing English and unrelated records");

    PretrainAnalysis a;
    for (const auto& [key, counts] : tally) {
        const auto s = shares.lookup(key.first);
        a.groups.push_back({key.first, key.second, s.percent, s.provenance == ShareProvenance::below_threshold,
                            counts.first, counts.second,
                            static_cast<double>(counts.second) / static_cast<double>(counts.first)});
    }
    std::stable_sort(a.groups.begin(), a.groups.end(), [](const ShareGroup& x, const ShareGroup& y) {
        return std::tuple(x.share_percent, to_string(x.language), to_string(x.variant)) <
               std::tuple(y.share_percent, to_string(y.language), to_string(y.variant));
    });
    std::vector<double> xs, ys;
    for (const auto& g : a.groups) xs.push_back(g.share_percent), ys.push_back(g.mean_accuracy);
    a.trend = least_squares_line(xs, ys);
    return a;
}

inline void write_pretrain_analysis(std::ostream& out, const PretrainAnalysis& a) {
    out << "language\tvariant\tshare_percent\tbelow_threshold\tn\tmean_accuracy\n";
    for (const auto& g : a.groups)
        out << to_string(g.language) << '\t' << to_string(g.variant) << '\t'
            << glm::format_number(g.share_percent, "%.2f") << '\t' << (g.below_threshold ? "yes" : "no") << '\t'
            << g.n << '\t' << glm::format_number(g.mean_accuracy, "%.5f") << '\n';
    if (a.trend)
        out << "# trend\tslope=" << glm::format_number(a.trend->slope, "%.6f")
            << "\tintercept=" << glm::format_number(a.trend->intercept, "%.6f") << '\n';
    else
        out << "# trend\tundefined (single share value)\n";
}

inline constexpr double kPretrainingTokens = 1.56e13;

inline double pretraining_fraction(double fine_tuning_tokens, double pretraining_tokens = kPretrainingTokens) {
    if (!(pretraining_tokens > 0.0)) throw ConfigError("pretraining token count must be positive");
    if (fine_tuning_tokens < 0.0) throw ConfigError("fine-tuning token count must be non-negative");
    return fine_tuning_tokens / pretraining_tokens;
}

} // namespace xling::effects

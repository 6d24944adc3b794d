#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "xling/effects/compose.hpp"
#include "xling/effects/spec.hpp"
#include "xling/error.hpp"
#include "xling/glm/coefficients.hpp"

namespace xling::effects {

#ifdef XLING_DATA_DIR
inline std::string default_fixture_dir() { return std::string(XLING_DATA_DIR) + "/fixtures"; }
#else
inline std::string default_fixture_dir() { return "data/fixtures"; }
#endif

inline std::string fixture_path(const std::string& dir, ModelId id) {
    return dir + "/model" + std::to_string(model_number(id)) + ".tsv";
}

// Published coefficient table for one model: term, estimate, std_error,
// p_value, label (the row name as printed).
inline glm::CoefficientTable load_fixture(ModelId id, const std::string& dir = default_fixture_dir()) {
    const auto path = fixture_path(dir, id);
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open coefficient fixture '" + path + "'");
    auto t = glm::read_table(in);
    if (!t.find(glm::kIntercept)) throw DataError("fixture '" + path + "' has no intercept row");
    return t;
}

// A composed value set against the figure quoted for it in the published text.
struct ConsistencyCheck {
    std::string description;
    double computed = 0.0;
    double reported = 0.0;
    double tolerance = 0.0005;

    double deviation() const { return computed - reported; }
    bool consistent() const { return std::abs(deviation()) <= tolerance * (1.0 + 1e-9); }
};

struct ReportedCumulative {
    ModelVariant variant;
    Language language;
    double value;
};

inline constexpr ReportedCumulative kReportedCumulative[] = {
    {ModelVariant::Multilanguage, Language::pl, -0.718}, {ModelVariant::Multilanguage, Language::tr, -0.573},
    {ModelVariant::EnglishSpanish, Language::id, 0.435}, {ModelVariant::EnglishSpanish, Language::ko, 0.545},
    {ModelVariant::Spanish, Language::es, -0.468},       {ModelVariant::EnglishSpanish, Language::es, -0.272},
};

struct ReportedShareTotal {
    ModelVariant variant;
    double value;
};

inline constexpr ReportedShareTotal kReportedShareTotals[] = {
    {ModelVariant::EnglishSpanish, 5.009},
    {ModelVariant::Spanish, 4.456},
    {ModelVariant::Multilanguage, 3.597},
};

inline std::vector<ConsistencyCheck> cumulative_checks(const glm::CoefficientTable& m3) {
    std::vector<ConsistencyCheck> out;
    for (const auto& r : kReportedCumulative)
        out.push_back({"cumulative log-odds " + std::string(to_string(r.variant)) + " x " +
                           std::string(language_name(r.language)),
                       cumulative_model_language(m3, r.variant, r.language).total, r.value});
    return out;
}

inline std::vector<ConsistencyCheck> share_total_checks(const glm::CoefficientTable& m4) {
    std::vector<ConsistencyCheck> out;
    for (const auto& r : kReportedShareTotals)
        out.push_back({"ShareUnrelated compounded effect " + std::string(to_string(r.variant)),
                       share_unrelated_total(m4, r.variant).total, r.value});
    return out;
}

// Rows whose printed name disagrees with the term they are stored under.
inline std::vector<std::string> fixture_remarks(ModelId id, const glm::CoefficientTable& t) {
    std::vector<std::string> out;
    for (const auto& c : t.rows())
        if (c.label.find("Share Unrelated") != std::string::npos && c.term.find(kShareUnrelated) == std::string::npos)
            out.push_back("model " + std::to_string(model_number(id)) + ": row printed as '" + c.label +
                          "' is stored as " + c.term);
    if (id == ModelId::M4)
        if (const auto* c = t.find(glm::join_interaction(model_term(ModelVariant::Multilanguage),
                                                         language_term(Language::tr))))
            out.push_back("model 4: estimate for " + c->term + " is printed as '33 0.674'; stored as " +
                          glm::format_number(c->estimate, "%.3f"));
    return out;
}

} // namespace xling::effects

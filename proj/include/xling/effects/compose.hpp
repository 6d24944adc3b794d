#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "xling/effects/spec.hpp"
#include "xling/error.hpp"
#include "xling/glm/coefficients.hpp"
#include "xling/glm/logistic.hpp"
#include "xling/types.hpp"

namespace xling::effects {

struct EffectComponent {
    std::string term;
    double value = 0.0;
    bool present = false;  // false: reference level or term absent, contributes 0
};

struct EffectResult {
    std::vector<EffectComponent> components;
    double total = 0.0;

    void add(const glm::CoefficientTable& table, std::string term) {
        EffectComponent c{std::move(term), 0.0, false};
        if (auto v = table.estimate(c.term)) c.value = *v, c.present = true;
        components.push_back(std::move(c));
        total = 0.0;
        for (const auto& x : components) total += x.value;
    }
};

namespace detail {

inline bool has_term_with(const glm::CoefficientTable& t, const std::string& needle) {
    return std::any_of(t.rows().begin(), t.rows().end(),
                       [&](const auto& c) { return c.term.find(needle) != std::string::npos; });
}

inline void require_interaction(const glm::CoefficientTable& t, const std::string& right, const char* what) {
    const std::string suffix = std::string(glm::kTimes) + right;
    if (!detail::has_term_with(t, suffix)) throw ConfigError(std::string("coefficients carry no ") + what + " terms");
}

} // namespace detail

// Model main effect + Language main effect + their interaction; reference
// levels contribute 0.
inline EffectResult cumulative_model_language(const glm::CoefficientTable& t, ModelVariant v, Language l) {
    detail::require_interaction(t, "Language:", "Model x Language interaction");
    EffectResult r;
    r.add(t, model_term(v));
    r.add(t, language_term(l));
    r.add(t, glm::join_interaction(model_term(v), language_term(l)));
    return r;
}

struct HeatmapCell {
    ModelVariant variant;
    Language language;
    EffectResult effect;
};

// Every variant x language cell, languages outer, in enum order.
inline std::vector<HeatmapCell> model_language_heatmap(const glm::CoefficientTable& t) {
    std::vector<HeatmapCell> cells;
    for (auto l : all_values<Language>())
        for (auto v : all_values<ModelVariant>()) cells.push_back({v, l, cumulative_model_language(t, v, l)});
    return cells;
}

inline void write_heatmap(std::ostream& out, const std::vector<HeatmapCell>& cells) {
    out << "language\tvariant\tmodel\tlanguage_effect\tinteraction\ttotal\n";
    for (const auto& c : cells) {
        out << to_string(c.language) << '\t' << to_string(c.variant);
        for (const auto& comp : c.effect.components) out << '\t' << glm::format_number(comp.value, "%.5f");
        out << '\t' << glm::format_number(c.effect.total, "%.5f") << '\n';
    }
}

// Model main effect + ShareUnrelated main effect + their interaction. Intercept
// and language terms are deliberately excluded; see accuracy_curve for those.
inline EffectResult share_unrelated_total(const glm::CoefficientTable& t, ModelVariant v) {
    if (!t.find(kShareUnrelated)) throw ConfigError("coefficients carry no ShareUnrelated term");
    EffectResult r;
    r.add(t, model_term(v));
    r.add(t, kShareUnrelated);
    r.add(t, glm::join_interaction(model_term(v), kShareUnrelated));
    return r;
}

struct CurvePoint {
    double share = 0.0;
    double total_effect = 0.0;
    double accuracy = 0.0;
};

// Intercept + Model + Language + Model x Language + share * (ShareUnrelated +
// Model x ShareUnrelated), through the logistic link. Other controls sit at
// their reference levels.
inline std::vector<CurvePoint> accuracy_curve(const glm::CoefficientTable& t, ModelVariant v, Language l,
                                              const std::vector<double>& grid) {
    if (!t.find(kShareUnrelated)) throw ConfigError("coefficients carry no ShareUnrelated term");
    EffectResult base;
    base.add(t, glm::kIntercept);
    base.add(t, model_term(v));
    base.add(t, language_term(l));
    base.add(t, glm::join_interaction(model_term(v), language_term(l)));
    EffectResult slope;
    slope.add(t, kShareUnrelated);
    slope.add(t, glm::join_interaction(model_term(v), kShareUnrelated));

    std::vector<CurvePoint> out;
    out.reserve(grid.size());
    for (double s : grid) {
        if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("share grid values must lie in [0, 1]");
        const double eta = base.total + s * slope.total;
        out.push_back({s, eta, glm::logistic(eta)});
    }
    return out;
}

inline std::vector<double> share_grid(std::size_t points = 11) {
    if (points < 2) throw ConfigError("share grid needs at least two points");
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

struct CurveSeries {
    ModelVariant variant;
    Language language;
    std::vector<CurvePoint> points;
};

inline std::vector<CurveSeries> all_accuracy_curves(const glm::CoefficientTable& t, const std::vector<double>& grid) {
    std::vector<CurveSeries> out;
    for (auto l : all_values<Language>())
        for (auto v : all_values<ModelVariant>()) out.push_back({v, l, accuracy_curve(t, v, l, grid)});
    return out;
}

inline void write_curves(std::ostream& out, const std::vector<CurveSeries>& series) {
    out << "language\tvariant\tshare_unrelated\ttotal_effect\taccuracy\n";
    for (const auto& s : series)
        for (const auto& p : s.points)
            out << to_string(s.language) << '\t' << to_string(s.variant) << '\t' << glm::format_number(p.share, "%.4f")
                << '\t' << glm::format_number(p.total_effect, "%.5f") << '\t'
                << glm::format_number(p.accuracy, "%.5f") << '\n';
}

} // namespace xling::effects

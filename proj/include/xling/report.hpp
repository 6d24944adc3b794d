#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xling/effects.hpp"
#include "xling/footprint.hpp"
#include "xling/glm/coefficients.hpp"

namespace xling::report {

struct TitledTable {
    std::string title;
    glm::CoefficientTable table;
};

struct FootprintSection {
    footprint::Catalog catalog;
    std::vector<footprint::FootprintReport> reports;
    std::string baseline;  // empty: no ratio table
    std::vector<footprint::RatioRow> ratios;
};

struct ReportInputs {
    std::vector<TitledTable> coefficients;
    std::optional<glm::CoefficientTable> model_language;  // heatmap source
    std::optional<glm::CoefficientTable> share_model;     // share totals and curves source
    std::vector<double> curve_grid{0.0, 0.25, 0.5, 0.75, 1.0};
    std::optional<effects::PretrainAnalysis> pretrain;
    std::optional<FootprintSection> footprint;
    // Consistency appendix.
    std::vector<effects::ConsistencyCheck> checks;
    std::vector<footprint::PublishedCheck> published;
    std::vector<std::string> remarks;
};

namespace detail {

inline std::string num(double v, const char* f) { return glm::format_number(v, f); }

inline void coefficient_table(std::ostream& out, const glm::CoefficientTable& t) {
    out << "| Term | Estimate | Std. Error | z | p-value | Signif. |\n";
    out << "|---|---:|---:|---:|---:|:---|\n";
    for (const auto& c : t.rows())
        out << "| " << c.term << " | " << num(c.estimate, "%.5f") << " | " << num(c.std_error, "%.5f") << " | "
            << num(c.z, "%.3f") << " | " << glm::format_p(c) << " | " << glm::significance_code(c.p_value) << " |\n";
    out << "\nSignificance codes: *** p<0.001, ** p<0.01, * p<0.05, . p<0.1\n";
}

inline void heatmap(std::ostream& out, const glm::CoefficientTable& t) {
    out << "| Language |";
    for (auto v : all_values<ModelVariant>()) out << ' ' << to_string(v) << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < all_values<ModelVariant>().size(); ++i) out << "---:|";
    out << '\n';
    for (auto l : all_values<Language>()) {
        out << "| " << language_name(l) << " (" << to_string(l) << ") |";
        for (auto v : all_values<ModelVariant>())
            out << ' ' << num(effects::cumulative_model_language(t, v, l).total, "%.3f") << " |";
        out << '\n';
    }
}

inline void share_totals(std::ostream& out, const glm::CoefficientTable& t) {
    out << "| Variant | Model | ShareUnrelated | Interaction | Total |\n|---|---:|---:|---:|---:|\n";
    for (auto v : all_values<ModelVariant>()) {
        const auto r = effects::share_unrelated_total(t, v);
        out << "| " << to_string(v) << " |";
        for (const auto& c : r.components) out << ' ' << num(c.value, "%.3f") << " |";
        out << ' ' << num(r.total, "%.3f") << " |\n";
    }
}

inline void curves(std::ostream& out, const glm::CoefficientTable& t, const std::vector<double>& grid) {
    out << "| Language | Variant |";
    for (double s : grid) out << " s=" << num(s, "%.2f") << " |";
    out << "\n|---|---|";
    for (std::size_t i = 0; i < grid.size(); ++i) out << "---:|";
    out << '\n';
    for (const auto& series : effects::all_accuracy_curves(t, grid)) {
        out << "| " << to_string(series.language) << " | " << to_string(series.variant) << " |";
        for (const auto& p : series.points) out << ' ' << num(p.accuracy, "%.3f") << " |";
        out << '\n';
    }
}

inline void pretrain(std::ostream& out, const effects::PretrainAnalysis& a) {
    out << "| Language | Variant | Share (%) | Below threshold | n | Mean accuracy |\n|---|---|---:|:---|---:|---:|\n";
    for (const auto& g : a.groups)
        out << "| " << to_string(g.language) << " | " << to_string(g.variant) << " | " << num(g.share_percent, "%.2f")
            << " | " << (g.below_threshold ? "yes" : "no") << " | " << g.n << " | " << num(g.mean_accuracy, "%.4f")
            << " |\n";
    if (a.trend)
        out << "\nTrend: accuracy = " << num(a.trend->intercept, "%.4f") << " + " << num(a.trend->slope, "%.4f")
            << " x share\n";
    else
        out << "\nTrend: undefined (all groups share one pretraining share)\n";
}

inline void footprint_table(std::ostream& out, const FootprintSection& f) {
    out << "| Provider | Model | Parameters | Speed (tok/s) | Energy (MWh) | Water (m3) | CO2 (t) | Cost (USD) |\n";
    out << "|---|---|---|---:|---:|---:|---:|---:|\n";
    for (const auto& r : f.reports) {
        const auto& p = f.catalog.find(r.model).profile;
        out << "| " << p.provider << " | " << p.model << " | " << (p.parameters.empty() ? "-" : p.parameters) << " | "
            << num(r.tps, "%.1f") << " | " << num(r.energy_mwh, "%.1f") << " | " << num(r.water_m3, "%.1f") << " | "
            << num(r.co2_t, "%.0f") << " | " << (r.cost_usd ? num(*r.cost_usd, "%.0f") : "-") << " |\n";
    }
    if (f.baseline.empty()) return;
    out << "\nRatios against " << f.baseline << ":\n\n";
    out << "| Model | Speedup | Cost ratio | CO2 delta (t) |\n|---|---:|---:|---:|\n";
    for (const auto& r : f.ratios)
        out << "| " << r.model << " | " << num(r.speedup, "%.1f") << " | "
            << (r.cost_ratio ? num(*r.cost_ratio, "%.1f") : "-") << " | " << num(r.co2_delta_t, "%.0f") << " |\n";
}

} // namespace detail

// Deterministic markdown; only sections with inputs are emitted.
inline std::string render_report(const ReportInputs& in) {
    std::ostringstream out;
    bool first = true;
    auto section = [&](const std::string& title) {
        if (!first) out << '\n';
        first = false;
        out << "## " << title << "\n\n";
    };
    for (const auto& t : in.coefficients) {
        section(t.title);
        detail::coefficient_table(out, t.table);
    }
    if (in.model_language) {
        section("Cumulative log-odds by model and language");
        detail::heatmap(out, *in.model_language);
    }
    if (in.share_model) {
        section("ShareUnrelated compounded effect");
        detail::share_totals(out, *in.share_model);
        section("Predicted accuracy by share of unrelated content");
        detail::curves(out, *in.share_model, in.curve_grid);
    }
    if (in.pretrain) {
        section("Accuracy by pretraining language share");
        detail::pretrain(out, *in.pretrain);
    }
    if (in.footprint) {
        section("Footprint");
        detail::footprint_table(out, *in.footprint);
    }
    if (!in.checks.empty() || !in.published.empty() || !in.remarks.empty()) {
        section("Consistency appendix");
        if (!in.checks.empty()) {
            out << "| Check | Computed | Reported | Deviation | Status |\n|---|---:|---:|---:|:---|\n";
            for (const auto& c : in.checks)
                out << "| " << c.description << " | " << detail::num(c.computed, "%.4f") << " | "
                    << detail::num(c.reported, "%.3f") << " | " << detail::num(c.deviation(), "%+.4f") << " | "
                    << (c.consistent() ? "consistent" : "DISCREPANCY") << " |\n";
        }
        if (!in.published.empty()) {
            if (!in.checks.empty()) out << '\n';
            out << "| Model | Quantity | Printed | Computed | Status |\n|---|---|---:|---:|:---|\n";
            for (const auto& p : in.published)
                out << "| " << p.model << " | " << p.quantity << " | " << p.printed << " | "
                    << detail::num(p.computed, "%.2f") << " | " << (p.reproduced ? "reproduced" : "DISCREPANCY")
                    << " |\n";
        }
        if (!in.remarks.empty()) {
            if (!in.checks.empty() || !in.published.empty()) out << '\n';
            for (const auto& r : in.remarks) out << "- " << r << '\n';
        }
    }
    return out.str();
}

} // namespace xling::report

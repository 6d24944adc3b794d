#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "xling/error.hpp"
#include "xling/footprint/catalog.hpp"
#include "xling/footprint/model.hpp"

namespace xling::footprint {

struct RatioRow {
    std::string model;
    double tps_baseline = 0.0;
    double tps_other = 0.0;
    double speedup = 0.0;  // tps_baseline / tps_other
    std::optional<double> cost_baseline;
    std::optional<double> cost_other;
    std::optional<double> cost_ratio;  // cost_other / cost_baseline
    double co2_delta_t = 0.0;          // co2_other - co2_baseline
};

// Ratios of every report against the baseline, in map order, baseline excluded.
inline std::vector<RatioRow> compare(const std::map<std::string, FootprintReport>& reports, const std::string& baseline) {
    auto it = reports.find(baseline);
    if (it == reports.end()) throw ConfigError("unknown baseline provider '" + baseline + "'");
    const FootprintReport& base = it->second;
    std::vector<RatioRow> rows;
    for (const auto& [name, r] : reports) {
        if (name == baseline) continue;
        RatioRow row;
        row.model = name;
        row.tps_baseline = base.tps;
        row.tps_other = r.tps;
        row.speedup = base.tps / r.tps;
        row.cost_baseline = base.cost_usd;
        row.cost_other = r.cost_usd;
        if (base.cost_usd && r.cost_usd && *base.cost_usd > 0) row.cost_ratio = *r.cost_usd / *base.cost_usd;
        row.co2_delta_t = r.co2_t - base.co2_t;
        rows.push_back(std::move(row));
    }
    return rows;
}

struct PublishedCheck {
    std::string model;
    std::string quantity;
    std::string printed;
    double computed = 0.0;
    bool reproduced = false;
};

// Compares a report with the figures printed for the same deployment.
inline std::vector<PublishedCheck> check_published(const CatalogEntry& entry, const FootprintReport& r) {
    std::vector<PublishedCheck> out;
    auto check = [&](const char* quantity, const std::optional<PrintedValue>& printed, std::optional<double> computed) {
        if (!printed) return;
        PublishedCheck c{entry.profile.model, quantity, printed->text, computed.value_or(std::nan("")), false};
        c.reproduced = computed && printed->reproduced_by(*computed);
        out.push_back(std::move(c));
    };
    check("energy_mwh", entry.published.energy_mwh, r.energy_mwh);
    check("water_m3", entry.published.water_m3, r.water_m3);
    check("co2_t", entry.published.co2_t, r.co2_t);
    check("cost_usd", entry.published.cost_usd, r.cost_usd);
    return out;
}

namespace detail {

inline std::string fmt(double v, const char* f) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

} // namespace detail

// Rounding as published: one decimal for speed, energy and water; whole
// tonnes; whole dollars.
inline void write_footprint_table(std::ostream& out, const Catalog& catalog, const std::vector<FootprintReport>& reports) {
    out << "provider\tmodel\tparameters\ttps\tenergy_mwh\twater_m3\tco2_t\tcost_usd\n";
    for (const auto& r : reports) {
        const auto& p = catalog.find(r.model).profile;
        out << p.provider << '\t' << p.model << '\t' << (p.parameters.empty() ? "-" : p.parameters) << '\t'
            << detail::fmt(r.tps, "%.1f") << '\t' << detail::fmt(r.energy_mwh, "%.1f") << '\t'
            << detail::fmt(r.water_m3, "%.1f") << '\t' << detail::fmt(r.co2_t, "%.0f") << '\t'
            << (r.cost_usd ? detail::fmt(*r.cost_usd, "%.0f") : std::string("-")) << '\n';
    }
}

inline void write_ratio_table(std::ostream& out, const std::string& baseline, const std::vector<RatioRow>& rows) {
    out << "baseline\tmodel\ttps_baseline\ttps_other\tspeedup\tcost_baseline\tcost_other\tcost_ratio\tco2_delta_t\n";
    for (const auto& r : rows) {
        auto opt = [](const std::optional<double>& v, const char* f) { return v ? detail::fmt(*v, f) : std::string("-"); };
        out << baseline << '\t' << r.model << '\t' << detail::fmt(r.tps_baseline, "%.1f") << '\t'
            << detail::fmt(r.tps_other, "%.1f") << '\t' << detail::fmt(r.speedup, "%.1f") << '\t'
            << opt(r.cost_baseline, "%.0f") << '\t' << opt(r.cost_other, "%.0f") << '\t' << opt(r.cost_ratio, "%.1f")
            << '\t' << detail::fmt(r.co2_delta_t, "%.0f") << '\n';
    }
}

} // namespace xling::footprint

#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "xling/csv.hpp"
#include "xling/error.hpp"

namespace xling::glm {

struct Coefficient {
    std::string term;
    double estimate = 0.0;
    double std_error = std::nan("");
    double z = std::nan("");
    double p_value = std::nan("");
    // Published tables print some p-values as bounds ("< 2e-16").
    bool p_is_bound = false;
    // Optional human-readable row label.
    std::string label{};
};

// R-style significance stars.
inline std::string significance_code(double p) {
    if (std::isnan(p)) return "";
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    if (p < 0.1) return ".";
    return "";
}

class CoefficientTable {
public:
    CoefficientTable() = default;
    explicit CoefficientTable(std::vector<Coefficient> rows) : rows_(std::move(rows)) {}

    const std::vector<Coefficient>& rows() const noexcept { return rows_; }
    bool empty() const noexcept { return rows_.empty(); }

    const Coefficient* find(const std::string& term) const {
        for (const auto& r : rows_)
            if (r.term == term) return &r;
        return nullptr;
    }

    std::optional<double> estimate(const std::string& term) const {
        if (const auto* c = find(term)) return c->estimate;
        return std::nullopt;
    }

    void push_back(Coefficient c) { rows_.push_back(std::move(c)); }

private:
    std::vector<Coefficient> rows_;
};

inline std::string format_number(double v, const char* fmt) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

inline std::string format_p(const Coefficient& c) {
    if (std::isnan(c.p_value)) return "NA";
    if (c.p_is_bound) return "<" + format_number(c.p_value, "%.3g");
    if (c.p_value < 2e-16) return "<2e-16";
    return format_number(c.p_value, c.p_value < 1e-4 ? "%.3g" : "%.5f");
}

// Tab-separated: term, estimate, std_error, z, p_value, signif.
inline void write_table(std::ostream& out, const CoefficientTable& table) {
    out << "term\testimate\tstd_error\tz\tp_value\tsignif\n";
    for (const auto& c : table.rows()) {
        out << c.term << '\t' << format_number(c.estimate, "%.5f") << '\t' << format_number(c.std_error, "%.5f")
            << '\t' << format_number(c.z, "%.3f") << '\t' << format_p(c) << '\t' << significance_code(c.p_value)
            << '\n';
    }
}

namespace detail {

inline double parse_double(const std::string& s, std::size_t line, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError(std::string("bad ") + what + " '" + s + "'", line);
    }
}

} // namespace detail

// Reads a tab-separated coefficient table. Required columns: term, estimate.
// Optional: std_error, z, p_value (may be written "<bound"), label.
inline CoefficientTable read_table(std::istream& in) {
    csv::Reader reader(in, '\t');
    auto header = reader.next();
    if (!header) return {};
    auto index_of = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header->size(); ++i)
            if ((*header)[i] == name) return i;
        return std::nullopt;
    };
    const auto term = index_of("term"), est = index_of("estimate");
    if (!term || !est) throw DataError("coefficient table needs 'term' and 'estimate' columns", 1);
    const auto se = index_of("std_error"), z = index_of("z"), p = index_of("p_value"), label = index_of("label");

    CoefficientTable table;
    while (auto f = reader.next()) {
        const std::size_t line = reader.record_line();
        if (f->size() != header->size()) throw DataError("wrong field count in coefficient table", line);
        Coefficient c;
        c.term = (*f)[*term];
        if (table.find(c.term)) throw DataError("duplicate term '" + c.term + "'", line);
        c.estimate = detail::parse_double((*f)[*est], line, "estimate");
        if (se && !(*f)[*se].empty() && (*f)[*se] != "NA") c.std_error = detail::parse_double((*f)[*se], line, "std_error");
        if (p && !(*f)[*p].empty() && (*f)[*p] != "NA") {
            std::string s = (*f)[*p];
            if (s.front() == '<') {
                c.p_is_bound = true;
                s.erase(0, 1);
            }
            c.p_value = detail::parse_double(s, line, "p_value");
        }
        if (z && !(*f)[*z].empty() && (*f)[*z] != "NA") c.z = detail::parse_double((*f)[*z], line, "z");
        else if (!std::isnan(c.std_error) && c.std_error > 0) c.z = c.estimate / c.std_error;
        if (label) c.label = (*f)[*label];
        table.push_back(std::move(c));
    }
    return table;
}

} // namespace xling::glm

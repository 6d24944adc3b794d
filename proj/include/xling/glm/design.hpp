#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "xling/error.hpp"

namespace xling::glm {

inline constexpr const char* kIntercept = "(Intercept)";
inline constexpr const char* kTimes = "\xC3\x97";  // U+00D7, joins interaction parts

// One analysis row: a level for every factor, a value for every continuous
// covariate, and a binary response.
struct Observation {
    std::map<std::string, std::string> levels;
    std::map<std::string, double> covariates;
    double response = 0.0;
};

struct FactorSpec {
    std::string name;
    std::string reference;
    // Preferred column order for non-reference levels; unlisted levels follow, sorted.
    std::vector<std::string> level_order{};
};

// Product of two terms; each side names a declared factor or covariate.
struct Interaction {
    std::string left;
    std::string right;
};

struct RegressionSpec {
    std::string response = "Correct";
    std::vector<FactorSpec> factors;
    std::vector<std::string> covariates;
    std::vector<Interaction> interactions;

    bool is_factor(const std::string& name) const {
        return std::any_of(factors.begin(), factors.end(), [&](const auto& f) { return f.name == name; });
    }
    bool is_covariate(const std::string& name) const {
        return std::find(covariates.begin(), covariates.end(), name) != covariates.end();
    }
    const FactorSpec& factor(const std::string& name) const {
        for (const auto& f : factors)
            if (f.name == name) return f;
        throw ConfigError("unknown factor '" + name + "'");
    }

    void validate() const {
        std::set<std::string> names;
        for (const auto& f : factors)
            if (!names.insert(f.name).second) throw ConfigError("term '" + f.name + "' declared twice");
        for (const auto& c : covariates)
            if (!names.insert(c).second) throw ConfigError("term '" + c + "' declared twice");
        for (const auto& i : interactions) {
            for (const auto* side : {&i.left, &i.right})
                if (!names.contains(*side))
                    throw ConfigError("interaction references undeclared term '" + *side + "'");
            if (i.left == i.right) throw ConfigError("interaction of '" + i.left + "' with itself");
        }
    }

    bool has_interaction(const std::string& a, const std::string& b) const {
        return std::any_of(interactions.begin(), interactions.end(), [&](const auto& i) {
            return (i.left == a && i.right == b) || (i.left == b && i.right == a);
        });
    }
};

// A design column is the product of level indicators and covariate values;
// the intercept is the empty product.
struct Column {
    std::string name;
    std::vector<std::pair<std::string, std::string>> indicators;  // (factor, level)
    std::vector<std::string> covariates;
};

inline std::string dummy_name(const std::string& factor, const std::string& level) { return factor + ":" + level; }

inline std::string join_interaction(const std::string& a, const std::string& b) { return a + kTimes + b; }

// Column layout plus the level sets seen at encode time. Encodes new rows for prediction.
class DesignLayout {
public:
    DesignLayout() = default;
    DesignLayout(RegressionSpec spec, std::vector<Column> columns, std::map<std::string, std::set<std::string>> levels)
        : spec_(std::move(spec)), columns_(std::move(columns)), levels_(std::move(levels)) {}

    const RegressionSpec& spec() const noexcept { return spec_; }
    const std::vector<Column>& columns() const noexcept { return columns_; }
    std::size_t size() const noexcept { return columns_.size(); }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& c : columns_) out.push_back(c.name);
        return out;
    }

    // Throws DataError naming any missing term or level not seen when the layout was built.
    Eigen::RowVectorXd encode(const Observation& row) const {
        for (const auto& f : spec_.factors) {
            auto it = row.levels.find(f.name);
            if (it == row.levels.end()) throw DataError("observation lacks a level for factor '" + f.name + "'");
            if (!levels_.at(f.name).contains(it->second))
                throw DataError("unseen level '" + it->second + "' for factor '" + f.name + "'");
        }
        for (const auto& c : spec_.covariates)
            if (!row.covariates.contains(c)) throw DataError("observation lacks covariate '" + c + "'");
        return encode_unchecked(row);
    }

    Eigen::RowVectorXd encode_unchecked(const Observation& row) const {
        Eigen::RowVectorXd x(static_cast<Eigen::Index>(columns_.size()));
        for (std::size_t j = 0; j < columns_.size(); ++j) {
            double v = 1.0;
            for (const auto& [f, l] : columns_[j].indicators)
                if (row.levels.at(f) != l) {
                    v = 0.0;
                    break;
                }
            if (v != 0.0)
                for (const auto& c : columns_[j].covariates) v *= row.covariates.at(c);
            x[static_cast<Eigen::Index>(j)] = v;
        }
        return x;
    }

private:
    RegressionSpec spec_;
    std::vector<Column> columns_;
    std::map<std::string, std::set<std::string>> levels_;
};

struct DesignMatrix {
    DesignLayout layout;
    Eigen::MatrixXd x;
    Eigen::VectorXd y;

    std::vector<std::string> names() const { return layout.names(); }

    // Raw construction for callers that already hold a numeric design.
    static DesignMatrix from_columns(std::vector<std::string> names, Eigen::MatrixXd x, Eigen::VectorXd y) {
        if (static_cast<Eigen::Index>(names.size()) != x.cols() || x.rows() != y.size())
            throw ConfigError("design dimensions do not match");
        std::vector<Column> cols;
        for (auto& n : names) cols.push_back(Column{std::move(n), {}, {}});
        return DesignMatrix{DesignLayout({}, std::move(cols), {}), std::move(x), std::move(y)};
    }
};

namespace detail {

// The column units a term contributes: non-reference levels for a factor, the
// covariate itself otherwise.
struct Unit {
    std::string name;
    std::vector<std::pair<std::string, std::string>> indicators;
    std::vector<std::string> covariates;
};

} // namespace detail

// Treatment coding against each factor's reference level. Interaction columns
// are products of their constituents; factor-by-factor pairs never observed
// together in the data are dropped.
inline DesignMatrix encode_design(const std::vector<Observation>& rows, const RegressionSpec& spec) {
    spec.validate();

    std::map<std::string, std::set<std::string>> levels;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& f : spec.factors) {
            auto it = rows[i].levels.find(f.name);
            if (it == rows[i].levels.end())
                throw DataError("observation lacks a level for factor '" + f.name + "'", i + 1);
            levels[f.name].insert(it->second);
        }
        for (const auto& c : spec.covariates)
            if (!rows[i].covariates.contains(c)) throw DataError("observation lacks covariate '" + c + "'", i + 1);
        const double y = rows[i].response;
        if (y != 0.0 && y != 1.0) throw DataError("response must be 0 or 1", i + 1);
    }

    std::map<std::string, std::vector<detail::Unit>> units;
    for (const auto& f : spec.factors) {
        const auto& seen = levels[f.name];
        if (!rows.empty() && !seen.contains(f.reference))
            throw ConfigError("reference level '" + f.reference + "' of factor '" + f.name +
                              "' does not occur in the data");
        std::vector<std::string> ordered;
        for (const auto& l : f.level_order)
            if (l != f.reference && seen.contains(l)) ordered.push_back(l);
        for (const auto& l : seen)
            if (l != f.reference && std::find(ordered.begin(), ordered.end(), l) == ordered.end())
                ordered.push_back(l);
        for (const auto& l : ordered) units[f.name].push_back({dummy_name(f.name, l), {{f.name, l}}, {}});
    }
    for (const auto& c : spec.covariates) units[c].push_back({c, {}, {c}});

    std::vector<Column> columns{Column{kIntercept, {}, {}}};
    for (const auto& f : spec.factors)
        for (const auto& u : units[f.name]) columns.push_back({u.name, u.indicators, u.covariates});
    for (const auto& c : spec.covariates)
        for (const auto& u : units[c]) columns.push_back({u.name, u.indicators, u.covariates});

    for (const auto& inter : spec.interactions) {
        for (const auto& a : units[inter.left]) {
            for (const auto& b : units[inter.right]) {
                Column col{join_interaction(a.name, b.name), a.indicators, a.covariates};
                col.indicators.insert(col.indicators.end(), b.indicators.begin(), b.indicators.end());
                col.covariates.insert(col.covariates.end(), b.covariates.begin(), b.covariates.end());
                if (!a.indicators.empty() && !b.indicators.empty()) {
                    const bool present = std::any_of(rows.begin(), rows.end(), [&](const Observation& r) {
                        for (const auto& [f, l] : col.indicators)
                            if (r.levels.at(f) != l) return false;
                        return true;
                    });
                    if (!present) continue;
                }
                columns.push_back(std::move(col));
            }
        }
    }

    DesignMatrix dm{DesignLayout(spec, std::move(columns), std::move(levels)), {}, {}};
    const auto n = static_cast<Eigen::Index>(rows.size());
    dm.x.resize(n, static_cast<Eigen::Index>(dm.layout.size()));
    dm.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        dm.x.row(i) = dm.layout.encode_unchecked(rows[static_cast<std::size_t>(i)]);
        dm.y[i] = rows[static_cast<std::size_t>(i)].response;
    }
    return dm;
}

} // namespace xling::glm

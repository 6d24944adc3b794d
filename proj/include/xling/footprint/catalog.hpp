#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xling/error.hpp"
#include "xling/footprint/model.hpp"

namespace xling::footprint {

// A figure as printed in a published table: its value and the place value of
// its last printed digit ("2.9k" -> 2900 with unit 100).
struct PrintedValue {
    double value = 0.0;
    double unit = 1.0;
    std::string text;

    static PrintedValue parse(const std::string& s) {
        if (s.empty()) throw ConfigError("empty printed value");
        std::string num = s;
        double mult = 1.0;
        if (num.back() == 'k') mult = 1e3, num.pop_back();
        else if (num.back() == 'M') mult = 1e6, num.pop_back();
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(num, &pos);
        } catch (const std::exception&) {
            throw ConfigError("bad printed value '" + s + "'");
        }
        if (pos != num.size()) throw ConfigError("bad printed value '" + s + "'");
        const auto dot = num.find('.');
        const int decimals = dot == std::string::npos ? 0 : static_cast<int>(num.size() - dot - 1);
        return PrintedValue{v * mult, std::pow(10.0, -decimals) * mult, s};
    }

    // True when `computed` rounds to this printed figure (half a unit either way).
    bool reproduced_by(double computed) const {
        return std::abs(computed - value) <= 0.5 * unit * (1.0 + 1e-9);
    }
};

struct PublishedRow {
    std::optional<PrintedValue> energy_mwh, water_m3, co2_t, cost_usd;
};

struct CatalogEntry {
    ProviderProfile profile;
    PublishedRow published{};
};

struct Catalog {
    // Fine-tuning token total carried verbatim; not modelled.
    double fine_tuning_tokens = 229500;
    std::vector<CatalogEntry> entries;

    const CatalogEntry& find(const std::string& model) const {
        for (const auto& e : entries)
            if (e.profile.model == model) return e;
        throw ConfigError("unknown provider '" + model + "'");
    }
};

namespace detail {

inline CatalogEntry entry(std::string provider, std::string model, std::string params, double tps, double wue,
                          double cif, std::optional<double> rin, std::optional<double> rout,
                          std::optional<double> price, Hosting hosting, const char* energy, const char* water,
                          const char* co2, const char* cost) {
    CatalogEntry e;
    e.profile = ProviderProfile{std::move(provider), std::move(model), std::move(params), tps, 0.35, wue, cif,
                                rin, rout, price, hosting};
    if (energy) e.published.energy_mwh = PrintedValue::parse(energy);
    if (water) e.published.water_m3 = PrintedValue::parse(water);
    if (co2) e.published.co2_t = PrintedValue::parse(co2);
    if (cost) e.published.cost_usd = PrintedValue::parse(cost);
    return e;
}

} // namespace detail

// The twelve reference deployments with their published footprint figures for
// a 10^10-item workload. WUE/CIF: MGHPC 0.5/0, Azure 3.442/0.3528,
// AWS 3.322/0.385, DeepSeek 7.216/0.600.
inline Catalog default_catalog() {
    using detail::entry;
    const auto api = Hosting::api_billed;
    const auto self = Hosting::self_hosted;
    const std::nullopt_t none = std::nullopt;
    Catalog c;
    c.entries = {
        entry("Meta", "Llama 3.2 - FT", "3B", 3854.4, 0.5, 0.0, none, none, 0.10, self, "28.5", "14.3", "0", "2.9k"),
        entry("Meta", "Llama 3.2", "3B", 107, 0.5, 0.0, none, none, none, self, "1026.7", "513.4", "0", nullptr),
        entry("Meta", "Llama 3.3", "70B", 87, 0.5, 0.0, none, none, none, self, "1262.8", "631.4", "0", nullptr),
        entry("Meta", "Llama 4 Maverick", "405B", 158, 0.5, 0.0, none, none, none, self, "695.3", "347.7", "0",
              nullptr),
        entry("OpenAI", "GPT-3.5 Turbo", "175B", 104, 3.442, 0.3528, 0.50, 1.50, none, api, "1056.4", "3636.0", "373",
              "0.580M"),
        entry("OpenAI", "GPT-4o", "1.7T", 108, 3.442, 0.3528, 2.50, 10, none, api, "1017.2", "3501.3", "359", "2.93M"),
        entry("Anthropic", "Claude Haiku 3.5", "", 79, 3.322, 0.385, 0.80, 4, none, api, "1390.6", "4619.7", "535",
              "0.944M"),
        entry("Anthropic", "Claude Sonnet 4", "", 68, 3.322, 0.385, 3, 15, none, api, "1615.6", "5367.0", "622",
              "3.54M"),
        entry("Anthropic", "Claude Opus 4", "", 70, 3.322, 0.385, 15, 75, none, api, "1569.4", "5213.7", "604",
              "17.70M"),
        entry("DeepSeek", "DeepSeek Chat (V3)", "671B", 27, 7.216, 0.600, 0.27, 1.10, none, api, "5231.5", "37750.4",
              "3139", "0.316M"),
        entry("DeepSeek", "DeepSeek Reasoner (R1)", "671B", 23, 7.216, 0.600, 0.55, 2.19, none, api, "4776.6",
              "34467.7", "2866", "0.643M"),
        entry("xAI", "Grok 4", "1.7T", 76, 3.442, 0.3528, 3, 15, none, api, "1445.5", "4975.6", "510", "3.54M"),
    };
    return c;
}

namespace detail {

template <typename J>
std::optional<double> opt_number(const J& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).template get<double>();
}

} // namespace detail

inline Catalog catalog_from_json(const nlohmann::json& j) {
    Catalog c;
    try {
        c.fine_tuning_tokens = j.value("fine_tuning_tokens", 229500.0);
        const double default_power = j.value("power_kw", 0.35);
        for (const auto& p : j.at("providers")) {
            CatalogEntry e;
            auto& pr = e.profile;
            pr.provider = p.value("provider", "");
            pr.model = p.at("model").get<std::string>();
            pr.parameters = p.value("parameters", "");
            pr.tps = p.at("tps").get<double>();
            pr.power_kw = p.value("power_kw", default_power);
            pr.wue = p.at("wue").get<double>();
            pr.cif = p.at("cif").get<double>();
            pr.rate_in = detail::opt_number(p, "rate_in");
            pr.rate_out = detail::opt_number(p, "rate_out");
            pr.electricity_price = detail::opt_number(p, "electricity_price");
            const auto hosting = p.value("hosting", std::string("api_billed"));
            if (hosting == "api_billed") pr.hosting = Hosting::api_billed;
            else if (hosting == "self_hosted") pr.hosting = Hosting::self_hosted;
            else throw ConfigError("unknown hosting mode '" + hosting + "'");
            pr.validate();
            if (p.contains("published")) {
                const auto& pub = p.at("published");
                auto get = [&](const char* k) -> std::optional<PrintedValue> {
                    if (!pub.contains(k)) return std::nullopt;
                    return PrintedValue::parse(pub.at(k).get<std::string>());
                };
                e.published = {get("energy_mwh"), get("water_m3"), get("co2_t"), get("cost_usd")};
            }
            for (const auto& prev : c.entries)
                if (prev.profile.model == pr.model) throw ConfigError("duplicate provider '" + pr.model + "'");
            c.entries.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed provider catalog: ") + e.what());
    }
    return c;
}

inline nlohmann::ordered_json catalog_to_json(const Catalog& c) {
    nlohmann::ordered_json j;
    j["fine_tuning_tokens"] = c.fine_tuning_tokens;
    j["power_kw"] = 0.35;
    j["providers"] = nlohmann::ordered_json::array();
    for (const auto& e : c.entries) {
        const auto& p = e.profile;
        nlohmann::ordered_json b;
        b["provider"] = p.provider;
        b["model"] = p.model;
        b["parameters"] = p.parameters;
        b["hosting"] = p.hosting == Hosting::api_billed ? "api_billed" : "self_hosted";
        b["tps"] = p.tps;
        if (p.power_kw != 0.35) b["power_kw"] = p.power_kw;
        b["wue"] = p.wue;
        b["cif"] = p.cif;
        if (p.rate_in) b["rate_in"] = *p.rate_in;
        if (p.rate_out) b["rate_out"] = *p.rate_out;
        if (p.electricity_price) b["electricity_price"] = *p.electricity_price;
        nlohmann::ordered_json pub = nlohmann::ordered_json::object();
        if (e.published.energy_mwh) pub["energy_mwh"] = e.published.energy_mwh->text;
        if (e.published.water_m3) pub["water_m3"] = e.published.water_m3->text;
        if (e.published.co2_t) pub["co2_t"] = e.published.co2_t->text;
        if (e.published.cost_usd) pub["cost_usd"] = e.published.cost_usd->text;
        if (!pub.empty()) b["published"] = pub;
        j["providers"].push_back(b);
    }
    return j;
}

inline Catalog load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open provider catalog '" + path + "'");
    try {
        return catalog_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("malformed provider catalog '" + path + "': " + e.what());
    }
}

} // namespace xling::footprint

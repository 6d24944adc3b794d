#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "xling/error.hpp"

namespace xling::footprint {

// Token budget of an inference campaign.
struct Workload {
    std::uint64_t item_count = 0;
    std::uint64_t prompt_tokens_per_item = 76;
    std::uint64_t content_tokens_per_item = 36;
    std::uint64_t output_tokens_per_item = 1;

    double input_tokens() const {
        return static_cast<double>(item_count) * static_cast<double>(prompt_tokens_per_item + content_tokens_per_item);
    }
    double output_tokens() const {
        return static_cast<double>(item_count) * static_cast<double>(output_tokens_per_item);
    }
    double total_tokens() const { return input_tokens() + output_tokens(); }
};

enum class Hosting { api_billed, self_hosted };

// How API-billed tokens are priced. `total_at_input_rate` charges every token
// (input and output) at the input rate and output tokens again at the output
// rate; it is the convention that reproduces the published cost column.
enum class Billing { total_at_input_rate, input_at_input_rate };

struct ProviderProfile {
    std::string provider;
    std::string model;
    std::string parameters;          // free text, e.g. "3B"
    double tps = 0.0;                // tokens per second
    double power_kw = 0.35;          // average accelerator + host draw
    double wue = 0.0;                // litres per kWh, site + source combined
    double cif = 0.0;                // kg CO2 per kWh
    std::optional<double> rate_in;   // USD per 1e6 tokens
    std::optional<double> rate_out;  // USD per 1e6 tokens
    std::optional<double> electricity_price;  // USD per kWh, self-hosted only
    Hosting hosting = Hosting::api_billed;

    bool has_cost_rates() const {
        return hosting == Hosting::api_billed ? (rate_in && rate_out) : electricity_price.has_value();
    }

    void validate() const {
        if (!(tps > 0.0)) throw ConfigError("provider '" + model + "': tps must be positive");
        for (auto v : {power_kw, wue, cif})
            if (v < 0.0) throw ConfigError("provider '" + model + "': constants must be non-negative");
        for (const auto& r : {rate_in, rate_out, electricity_price})
            if (r && *r < 0.0) throw ConfigError("provider '" + model + "': rates must be non-negative");
    }
};

// Energy in MWh: tokens / tps seconds at power_kw. Callers keep the unrounded
// value for the derived quantities below.
inline double estimate_energy(const Workload& w, const ProviderProfile& p) {
    if (!(p.tps > 0.0)) throw ConfigError("tps must be positive");
    const double kwh = w.total_tokens() / p.tps * p.power_kw / 3600.0;
    return kwh / 1000.0;
}

// Cubic metres: kWh * (litres/kWh) / 1000 litres per m3.
inline double estimate_water(double energy_mwh, const ProviderProfile& p) { return energy_mwh * 1000.0 * p.wue / 1000.0; }

// Tonnes: kWh * (kg/kWh) / 1000 kg per tonne.
inline double estimate_co2(double energy_mwh, const ProviderProfile& p) { return energy_mwh * 1000.0 * p.cif / 1000.0; }

inline double estimate_cost(const Workload& w, const ProviderProfile& p, Billing billing = Billing::total_at_input_rate) {
    if (p.hosting == Hosting::self_hosted) {
        if (!p.electricity_price)
            throw ConfigError("provider '" + p.model + "' is self-hosted but has no electricity price");
        return estimate_energy(w, p) * 1000.0 * *p.electricity_price;
    }
    if (!p.rate_in || !p.rate_out) throw ConfigError("provider '" + p.model + "' lacks token rates");
    const double billed_in = billing == Billing::total_at_input_rate ? w.total_tokens() : w.input_tokens();
    return billed_in * *p.rate_in / 1e6 + w.output_tokens() * *p.rate_out / 1e6;
}

struct FootprintReport {
    std::string model;
    double tps = 0.0;
    double energy_mwh = 0.0;
    double water_m3 = 0.0;
    double co2_t = 0.0;
    std::optional<double> cost_usd;  // absent when the profile has no rates
    double duration_s = 0.0;
};

inline FootprintReport estimate_footprint(const Workload& w, const ProviderProfile& p,
                                          Billing billing = Billing::total_at_input_rate) {
    p.validate();
    FootprintReport r;
    r.model = p.model;
    r.tps = p.tps;
    r.energy_mwh = estimate_energy(w, p);
    r.water_m3 = estimate_water(r.energy_mwh, p);
    r.co2_t = estimate_co2(r.energy_mwh, p);
    if (p.has_cost_rates()) r.cost_usd = estimate_cost(w, p, billing);
    r.duration_s = w.total_tokens() / p.tps;
    return r;
}

} // namespace xling::footprint

#include "ftt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "ftt/errors.hpp"
#include "json_util.hpp"

namespace ftt {

namespace {

using detail::json;

constexpr int kFormatVersion = 1;
constexpr double kMwhPerGwh = 1000.0;

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

PiecewiseSeries parse_points(const json& arr, const std::string& path) {
    if (!arr.is_array() || arr.empty()) {
        throw ConfigError(path + ": expected a non-empty array of [year, value]");
    }
    PiecewiseSeries s;
    double prev_year = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& p = arr[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            throw ConfigError(path + "[" + std::to_string(i) + "]: expected [year, value]");
        }
        const double year = p[0].get<double>();
        if (year <= prev_year) {
            throw ConfigError(path + ": years must be strictly increasing");
        }
        prev_year = year;
        s.years.push_back(year);
        s.values.push_back(p[1].get<double>());
    }
    return s;
}

}  // namespace

double default_k_scale() {
    // A decisive cost advantage between two technologies with tau = 40 y and
    // t = 4 y completes a changeover in 50 years.
    return calibrate_k(40.0, 4.0, 50.0);
}

FuelPriceMode fuel_price_mode_from_string(const std::string& s) {
    if (s == "table") return FuelPriceMode::Table;
    if (s == "curve") return FuelPriceMode::Curve;
    if (s == "max") return FuelPriceMode::MaxTableCurve;
    throw ConfigError("fuel_price_mode: expected one of table/curve/max, got '" + s + "'");
}

std::string to_string(FuelPriceMode m) {
    switch (m) {
        case FuelPriceMode::Table: return "table";
        case FuelPriceMode::Curve: return "curve";
        case FuelPriceMode::MaxTableCurve: return "max";
    }
    return "table";
}

double PiecewiseSeries::at(double year) const {
    if (years.empty()) throw ModelError("empty series");
    if (year <= years.front()) return values.front();
    if (year >= years.back()) return values.back();
    auto it = std::upper_bound(years.begin(), years.end(), year);
    const std::size_t hi = static_cast<std::size_t>(it - years.begin());
    const std::size_t lo = hi - 1;
    const double w = (year - years[lo]) / (years[hi] - years[lo]);
    return values[lo] + w * (values[hi] - values[lo]);
}

double CarbonPricePath::at(double year, double start_year) const {
    if (!points.years.empty()) return points.at(year);
    return initial * std::pow(1.0 + growth_per_year, year - start_year);
}

ScenarioConfig parse_config(const std::string& document_text) {
    json doc = detail::parse_json<ConfigError>(document_text, "config");
    detail::require_object<ConfigError>(doc, "config");
    detail::reject_unknown_keys<ConfigError>(
        doc,
        {"format_version", "name", "horizon", "demand", "carbon_price", "discount_rate",
         "grid", "k_scale", "gate_softness", "initial_shares", "seed",
         "fuel_price_mode"},
        "config");
    detail::check_format_version<ConfigError>(doc, kFormatVersion, "config");

    ScenarioConfig c;
    c.name = detail::string_or<ConfigError>(doc, "name", "scenario", "config");

    const json& horizon = detail::require_key<ConfigError>(doc, "horizon", "config");
    detail::require_object<ConfigError>(horizon, "config.horizon");
    detail::reject_unknown_keys<ConfigError>(horizon, {"start", "end", "dt"},
                                             "config.horizon");
    c.start_year = detail::require_number<ConfigError>(horizon, "start", "config.horizon");
    c.end_year = detail::require_number<ConfigError>(horizon, "end", "config.horizon");
    c.dt = detail::number_or<ConfigError>(horizon, "dt", 0.25, "config.horizon");
    if (c.end_year < c.start_year) throw ConfigError("config.horizon: end before start");
    if (!(c.dt > 0.0)) throw ConfigError("config.horizon.dt: must be > 0");

    const json& demand = detail::require_key<ConfigError>(doc, "demand", "config");
    detail::require_object<ConfigError>(demand, "config.demand");
    detail::reject_unknown_keys<ConfigError>(demand, {"points"}, "config.demand");
    c.demand = parse_points(detail::require_key<ConfigError>(demand, "points", "config.demand"),
                            "config.demand.points");
    for (double v : c.demand.values) {
        if (!(v > 0.0)) throw ConfigError("config.demand: demand must be > 0");
    }

    const json& carbon = detail::require_key<ConfigError>(doc, "carbon_price", "config");
    detail::require_object<ConfigError>(carbon, "config.carbon_price");
    detail::reject_unknown_keys<ConfigError>(
        carbon, {"points", "initial", "growth_percent_per_year"}, "config.carbon_price");
    if (carbon.contains("points")) {
        c.carbon_price.points = parse_points(carbon["points"], "config.carbon_price.points");
    } else {
        c.carbon_price.initial =
            detail::require_number<ConfigError>(carbon, "initial", "config.carbon_price");
        c.carbon_price.growth_per_year =
            detail::number_or<ConfigError>(carbon, "growth_percent_per_year", 0.0,
                                           "config.carbon_price") /
            100.0;
    }

    c.discount_rate = detail::require_number<ConfigError>(doc, "discount_rate", "config");
    if (c.discount_rate < 0.0) throw ConfigError("config.discount_rate: must be >= 0");

    if (doc.contains("grid")) {
        const json& grid = doc["grid"];
        detail::require_object<ConfigError>(grid, "config.grid");
        detail::reject_unknown_keys<ConfigError>(
            grid,
            {"peak_height_fraction", "peak_energy_gwh", "storage_power_gw",
             "storage_energy_gwh", "day_length_hours"},
            "config.grid");
        c.grid.peak_height_fraction = detail::number_or<ConfigError>(
            grid, "peak_height_fraction", 0.3, "config.grid");
        c.grid.peak_energy_gwh =
            detail::number_or<ConfigError>(grid, "peak_energy_gwh", -1.0, "config.grid");
        c.grid.storage_power_gw =
            detail::number_or<ConfigError>(grid, "storage_power_gw", 0.0, "config.grid");
        c.grid.storage_energy_gwh =
            detail::number_or<ConfigError>(grid, "storage_energy_gwh", 0.0, "config.grid");
        c.grid.day_length_h =
            detail::number_or<ConfigError>(grid, "day_length_hours", 24.0, "config.grid");
        for (double v : {c.grid.peak_height_fraction, c.grid.storage_power_gw,
                         c.grid.storage_energy_gwh, c.grid.day_length_h}) {
            if (v < 0.0) throw ConfigError("config.grid: parameters must be >= 0");
        }
    }

    c.k_scale = detail::number_or<ConfigError>(doc, "k_scale", default_k_scale(), "config");
    if (!(c.k_scale > 0.0)) throw ConfigError("config.k_scale: must be > 0");
    c.gate_softness =
        detail::number_or<ConfigError>(doc, "gate_softness", 0.05, "config");
    if (!(c.gate_softness > 0.0)) throw ConfigError("config.gate_softness: must be > 0");

    const json& shares = detail::require_key<ConfigError>(doc, "initial_shares", "config");
    detail::require_object<ConfigError>(shares, "config.initial_shares");
    double total = 0.0;
    for (const auto& [key, value] : shares.items()) {
        if (detail::is_comment_key(key)) continue;
        if (!value.is_number()) {
            throw ConfigError("config.initial_shares." + key + ": expected a number");
        }
        const double s = value.get<double>();
        if (s < 0.0) throw ConfigError("config.initial_shares." + key + ": must be >= 0");
        c.initial_shares.emplace_back(key, s);
        total += s;
    }
    if (c.initial_shares.empty()) throw ConfigError("config.initial_shares: empty");
    if (std::fabs(total - 1.0) > 1e-6) {
        throw ConfigError("config.initial_shares: shares sum to " + std::to_string(total) +
                          ", expected 1");
    }
    // Exact renormalisation of rounding in the data file.
    for (auto& [id, s] : c.initial_shares) s /= total;

    if (doc.contains("seed")) {
        const json& seed = doc["seed"];
        if (!seed.is_number_integer() && !seed.is_number_unsigned()) {
            throw ConfigError("config.seed: expected an integer");
        }
        c.seed = seed.get<std::uint64_t>();
    }
    c.fuel_price_mode = fuel_price_mode_from_string(
        detail::string_or<ConfigError>(doc, "fuel_price_mode", "table", "config"));
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = detail::read_text_file(path);
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text);
}

ModelData load_model_data(const std::string& data_dir) {
    ModelData data;
    TechDataFile file = load_tech_data(data_dir + "/technologies.json");
    data.registry = std::move(file.registry);
    data.spillover = default_spillover(data.registry);
    apply_spillover_overrides(data.spillover, data.registry, file.spillover_overrides);
    data.resources = load_resource_data(data_dir + "/resources.json");
    for (const auto& t : data.registry.techs) {
        if (!t.resource_id.empty() && !data.resources.contains(t.resource_id)) {
            throw DataError("technology '" + t.id + "' links to unknown resource '" +
                            t.resource_id + "'");
        }
    }
    return data;
}

namespace {

// Per-run working state around the step pipeline.
struct RunState {
    std::vector<CostSupplyCurve> curves;           // deterministic, one per resource
    std::vector<int> resource_of_tech;             // -1 when unlinked
    std::vector<std::vector<std::size_t>> techs_of_resource;
};

RunState make_run_state(const TechnologyRegistry& reg, const ResourceSet& resources,
                        const std::vector<CostSupplyCurve>& sampled) {
    RunState rs;
    rs.curves = sampled;
    rs.resource_of_tech.assign(reg.size(), -1);
    rs.techs_of_resource.resize(resources.size());
    for (std::size_t i = 0; i < reg.size(); ++i) {
        if (reg[i].resource_id.empty()) continue;
        const std::size_t r = resources.index_of(reg[i].resource_id);
        rs.resource_of_tech[i] = static_cast<int>(r);
        rs.techs_of_resource[r].push_back(i);
    }
    // Canonical order inside each resource group keeps occupancy sums
    // independent of declaration order.
    for (auto& group : rs.techs_of_resource) {
        std::sort(group.begin(), group.end(), [&reg](std::size_t a, std::size_t b) {
            return reg[a].id < reg[b].id;
        });
    }
    return rs;
}

std::vector<double> fuel_prices(const TechnologyRegistry& reg, const RunState& rs,
                                FuelPriceMode mode) {
    std::vector<double> prices(reg.size());
    for (std::size_t i = 0; i < reg.size(); ++i) {
        prices[i] = reg[i].fuel_cost;
        const int r = rs.resource_of_tech[i];
        if (mode == FuelPriceMode::Table || r < 0) continue;
        const CostSupplyCurve& curve = rs.curves[r];
        double marginal = marginal_cost(curve, curve.used);
        if (curve.kind == ResourceKind::Stock) marginal *= curve.gj_per_mwh;
        prices[i] = mode == FuelPriceMode::Curve ? marginal
                                                 : std::max(prices[i], marginal);
    }
    return prices;
}

// Occupied flow per resource: the generation of the linked technologies.
void update_flow_occupancy(const TechnologyRegistry& reg, RunState& rs,
                           const std::vector<double>& generation_gwh) {
    for (std::size_t r = 0; r < rs.curves.size(); ++r) {
        if (rs.curves[r].kind != ResourceKind::Flow) continue;
        double occupied = 0.0;
        for (std::size_t i : rs.techs_of_resource[r]) occupied += generation_gwh[i];
        consume(rs.curves[r], occupied, 0.0);
    }
    (void)reg;
}

// Stock depletion over one step from the generation at its start.
void deplete_stocks(const TechnologyRegistry& reg, RunState& rs,
                    const std::vector<double>& generation_gwh, double dt) {
    for (std::size_t r = 0; r < rs.curves.size(); ++r) {
        if (rs.curves[r].kind != ResourceKind::Stock) continue;
        double fuel_gj_per_y = 0.0;
        for (std::size_t i : rs.techs_of_resource[r]) {
            fuel_gj_per_y += generation_gwh[i] * kMwhPerGwh * rs.curves[r].gj_per_mwh;
        }
        consume(rs.curves[r], fuel_gj_per_y, dt);
    }
    (void)reg;
}

SimulationOutput run_with_curves(const ScenarioConfig& config, const ModelData& data,
                                 const std::vector<CostSupplyCurve>& sampled,
                                 const StepObserver& observer) {
    const TechnologyRegistry& reg = data.registry;
    const std::size_t n = reg.size();

    SimulationOutput out;
    out.scenario_name = config.name;
    for (const auto& t : reg.techs) out.tech_ids.push_back(t.id);

    // Initial shares from the config, validated against the registry.
    SharesState shares;
    shares.shares.assign(n, 0.0);
    for (const auto& [id, s] : config.initial_shares) {
        if (!reg.contains(id)) {
            throw ConfigError("initial_shares." + id + ": unknown technology");
        }
        shares.shares[reg.index_of(id)] = s;
    }
    shares.validate(1e-9);

    RunState rs = make_run_state(reg, data.resources, sampled);
    LearningState learning = make_learning_state(reg);
    const SubstitutionMatrix a = substitution_matrix(reg, config.k_scale);

    const long n_steps = std::lround((config.end_year - config.start_year) / config.dt);
    double emissions_cum = 0.0;
    double prev_rate = 0.0;

    PowerState power = capacities(reg, shares, config.demand.at(config.start_year));
    update_flow_occupancy(reg, rs, power.generation_gwh);

    auto record_step = [&](double year, const PowerState& p,
                           const std::vector<double>& lcoe_median,
                           const std::vector<double>& inv, double carbon,
                           bool first) -> StepRecord& {
        StepRecord rec;
        rec.year = year;
        rec.shares = shares.shares;
        rec.capacity_gw = p.capacity_gw;
        rec.generation_gwh = p.generation_gwh;
        rec.investment_musd = inv;
        rec.lcoe_usd_mwh = lcoe_median;
        rec.emissions_by_tech = emissions_by_tech(reg, p.generation_gwh);
        rec.emissions_rate = emissions_rate(reg, p.generation_gwh);
        if (!first) {
            emissions_cum = advance_cumulative_emissions(emissions_cum, prev_rate,
                                                         rec.emissions_rate, config.dt);
        }
        prev_rate = rec.emissions_rate;
        rec.emissions_cumulative = emissions_cum;
        rec.avg_lcoe = average_lcoe(reg, shares, lcoe_median);
        rec.cf_bar = p.cf_bar;
        rec.u_tot_gw = p.u_tot_gw;
        rec.carbon_price = carbon;
        const CapacityStats stats = capacity_stats(reg, shares, p.u_tot_gw, p.cf_bar);
        rec.constraint_slack = constraint_slacks(shares, config.grid, reg, stats,
                                                 p.demand_gwh);
        out.steps.push_back(std::move(rec));
        if (observer) observer(out.steps.back());
        return out.steps.back();
    };

    try {
        // Initial record: replacement-only investment on the starting fleet.
        {
            const double carbon = config.carbon_price.at(config.start_year,
                                                         config.start_year);
            const std::vector<double> fuel = fuel_prices(reg, rs, config.fuel_price_mode);
            std::vector<double> lcoe_median(n), unit_cost(n);
            for (std::size_t i = 0; i < n; ++i) {
                unit_cost[i] = learned_cost(learning, i);
                lcoe_median[i] =
                    lcoe(reg[i], unit_cost[i], fuel[i], carbon, config.discount_rate).median;
            }
            const std::vector<double> inv =
                investment(reg, power.capacity_gw, power.capacity_gw, 1.0, unit_cost);
            record_step(config.start_year, power, lcoe_median, inv, carbon, true);
        }

        for (long k = 0; k < n_steps; ++k) {
            const double year = config.start_year + static_cast<double>(k) * config.dt;
            const double next_year = config.start_year +
                                     static_cast<double>(k + 1) * config.dt;
            const double carbon = config.carbon_price.at(year, config.start_year);

            const std::vector<double> fuel = fuel_prices(reg, rs, config.fuel_price_mode);
            std::vector<double> lcoe_dist_median(n), unit_cost(n);
            std::vector<CostDistribution> costs(n);
            for (std::size_t i = 0; i < n; ++i) {
                unit_cost[i] = learned_cost(learning, i);
                costs[i] = lcoe(reg[i], unit_cost[i], fuel[i], carbon, config.discount_rate);
                lcoe_dist_median[i] = costs[i].median;
            }

            const CapacityStats stats =
                capacity_stats(reg, shares, power.u_tot_gw, power.cf_bar);
            const ShareLimits limits = share_limits(shares, config.grid, reg, stats);

            const SharesState next_shares = shares_step(
                reg, shares, costs, a, limits, config.gate_softness, config.dt);
            next_shares.validate(1e-9);

            const PowerState next_power =
                capacities(reg, next_shares, config.demand.at(next_year));

            std::vector<double> capacity_change(n);
            for (std::size_t i = 0; i < n; ++i) {
                capacity_change[i] = next_power.capacity_gw[i] - power.capacity_gw[i];
            }
            const std::vector<double> inv = investment(
                reg, power.capacity_gw, next_power.capacity_gw, config.dt, unit_cost);

            learning = accumulate_capacity(learning, data.spillover, reg, capacity_change,
                                           power.capacity_gw, config.dt);

            deplete_stocks(reg, rs, power.generation_gwh, config.dt);
            update_flow_occupancy(reg, rs, next_power.generation_gwh);

            shares = next_shares;
            power = next_power;

            // Costs recorded at the new state, with updated learning and
            // resource prices.
            const double next_carbon =
                config.carbon_price.at(next_year, config.start_year);
            const std::vector<double> next_fuel =
                fuel_prices(reg, rs, config.fuel_price_mode);
            std::vector<double> next_lcoe(n);
            for (std::size_t i = 0; i < n; ++i) {
                next_lcoe[i] = lcoe(reg[i], learned_cost(learning, i), next_fuel[i],
                                    next_carbon, config.discount_rate)
                                   .median;
            }
            record_step(next_year, power, next_lcoe, inv, next_carbon, false);

            // Hard constraint failures halt the run; gate overshoot within a
            // few softness widths is expected and tolerated.
            const CapacityStats post_stats =
                capacity_stats(reg, shares, power.u_tot_gw, power.cf_bar);
            const auto violations =
                check_constraints(shares, config.grid, reg, post_stats, power.demand_gwh,
                                  3.0 * config.gate_softness);
            if (!violations.empty()) {
                out.halted_early = true;
                out.diagnostic = "grid constraint violated: " + violations.front().description;
                break;
            }
        }
    } catch (const ModelError& e) {
        out.halted_early = true;
        out.diagnostic = e.what();
    }
    return out;
}

std::vector<CostSupplyCurve> central_curves(const ResourceSet& resources) {
    std::vector<CostSupplyCurve> curves;
    curves.reserve(resources.size());
    for (const auto& dist : resources.resources) curves.push_back(dist.central);
    return curves;
}

}  // namespace

SimulationOutput run(const ScenarioConfig& config, const ModelData& data,
                     const StepObserver& observer) {
    return run_with_curves(config, data, central_curves(data.resources), observer);
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.size() == 1) return sorted[0];
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

QuantileBand make_band(const std::vector<std::vector<double>>& member_series) {
    // member_series[m][t]; sorted per time index before extraction, so the
    // reduction does not depend on member order.
    QuantileBand band;
    if (member_series.empty()) return band;
    const std::size_t n_steps = member_series.front().size();
    band.q_low.resize(n_steps);
    band.median.resize(n_steps);
    band.q_high.resize(n_steps);
    std::vector<double> column(member_series.size());
    for (std::size_t t = 0; t < n_steps; ++t) {
        for (std::size_t m = 0; m < member_series.size(); ++m) {
            column[m] = member_series[m][t];
        }
        std::sort(column.begin(), column.end());
        band.q_low[t] = quantile_sorted(column, 0.025);
        band.median[t] = quantile_sorted(column, 0.5);
        band.q_high[t] = quantile_sorted(column, 0.975);
    }
    return band;
}

}  // namespace

EnsembleSummary run_ensemble(const ScenarioConfig& config, const ModelData& data,
                             int n_members) {
    if (n_members < 1) throw ConfigError("ensemble size must be >= 1");

    EnsembleSummary summary;
    summary.scenario_name = config.name;
    for (const auto& t : data.registry.techs) summary.tech_ids.push_back(t.id);
    summary.members = n_members;

    const std::size_t n_tech = data.registry.size();
    std::vector<SimulationOutput> outputs;
    outputs.reserve(n_members);

    for (int m = 0; m < n_members; ++m) {
        std::vector<CostSupplyCurve> curves;
        curves.reserve(data.resources.size());
        for (const auto& dist : data.resources.resources) {
            const uint64_t seed = splitmix64(splitmix64(config.seed ^
                                                        static_cast<uint64_t>(m + 1)) ^
                                             fnv1a(dist.central.id));
            curves.push_back(sample_curve(dist, seed));
        }
        try {
            SimulationOutput out = run_with_curves(config, data, curves, {});
            if (out.halted_early) {
                ++summary.failures;
            } else {
                outputs.push_back(std::move(out));
            }
        } catch (const std::exception&) {
            ++summary.failures;
        }
    }
    if (outputs.empty()) {
        throw ModelError("ensemble: every member failed");
    }

    const std::size_t n_steps = outputs.front().steps.size();
    for (const auto& rec : outputs.front().steps) summary.years.push_back(rec.year);

    auto gather = [&](auto&& get) {
        std::vector<std::vector<double>> series(outputs.size());
        for (std::size_t m = 0; m < outputs.size(); ++m) {
            series[m].resize(n_steps);
            for (std::size_t t = 0; t < n_steps; ++t) {
                series[m][t] = get(outputs[m].steps[t]);
            }
        }
        return make_band(series);
    };

    summary.emissions_rate = gather([](const StepRecord& r) { return r.emissions_rate; });
    summary.emissions_cumulative =
        gather([](const StepRecord& r) { return r.emissions_cumulative; });
    summary.avg_lcoe = gather([](const StepRecord& r) { return r.avg_lcoe; });
    summary.total_generation_gwh = gather([](const StepRecord& r) {
        double g = 0.0;
        for (double v : r.generation_gwh) g += v;
        return g;
    });
    summary.capacity_gw.resize(n_tech);
    summary.generation_gwh.resize(n_tech);
    for (std::size_t i = 0; i < n_tech; ++i) {
        summary.capacity_gw[i] =
            gather([i](const StepRecord& r) { return r.capacity_gw[i]; });
        summary.generation_gwh[i] =
            gather([i](const StepRecord& r) { return r.generation_gwh[i]; });
    }
    return summary;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream outf(path, std::ios::binary);
    if (!outf) throw DataError("cannot write file '" + path + "'");
    outf << text;
}

json band_to_json(const QuantileBand& band) {
    json j;
    j["p2.5"] = band.q_low;
    j["p50"] = band.median;
    j["p97.5"] = band.q_high;
    return j;
}

}  // namespace

std::string series_csv(const SimulationOutput& out) {
    std::string csv =
        "year,tech_id,share,capacity_GW,generation_GWh,investment,lcoe,emissions_rate\n";
    for (const auto& rec : out.steps) {
        for (std::size_t i = 0; i < out.tech_ids.size(); ++i) {
            csv += format_double(rec.year);
            csv += ',';
            csv += out.tech_ids[i];
            csv += ',';
            csv += format_double(rec.shares[i]);
            csv += ',';
            csv += format_double(rec.capacity_gw[i]);
            csv += ',';
            csv += format_double(rec.generation_gwh[i]);
            csv += ',';
            csv += format_double(rec.investment_musd[i]);
            csv += ',';
            csv += format_double(rec.lcoe_usd_mwh[i]);
            csv += ',';
            csv += format_double(rec.emissions_by_tech[i]);
            csv += '\n';
        }
    }
    return csv;
}

void write_series_csv(const SimulationOutput& out, const std::string& path) {
    write_text(path, series_csv(out));
}

void write_summary_json(const SimulationOutput& out, const ScenarioConfig& config,
                        const std::string& path) {
    json j;
    j["scenario"] = out.scenario_name;
    j["horizon"] = {{"start", config.start_year}, {"end", config.end_year},
                    {"dt", config.dt}};
    j["discount_rate"] = config.discount_rate;
    j["k_scale"] = config.k_scale;
    j["gate_softness"] = config.gate_softness;
    j["fuel_price_mode"] = to_string(config.fuel_price_mode);
    j["seed"] = config.seed;
    j["technologies"] = out.tech_ids;
    j["steps"] = out.steps.size();
    j["halted_early"] = out.halted_early;
    if (out.halted_early) j["diagnostic"] = out.diagnostic;
    if (!out.steps.empty()) {
        const StepRecord& last = out.steps.back();
        json final;
        final["year"] = last.year;
        final["shares"] = last.shares;
        final["capacity_gw"] = last.capacity_gw;
        final["emissions_rate_t_per_y"] = last.emissions_rate;
        final["emissions_cumulative_t"] = last.emissions_cumulative;
        final["avg_lcoe_usd_mwh"] = last.avg_lcoe;
        final["carbon_price_usd_t"] = last.carbon_price;
        j["final"] = std::move(final);
        double worst[3] = {1e300, 1e300, 1e300};
        for (const auto& rec : out.steps) {
            for (int i = 0; i < 3; ++i) {
                worst[i] = std::min(worst[i], rec.constraint_slack[i]);
            }
        }
        j["min_constraint_slack"] = {worst[0], worst[1], worst[2]};
    }
    write_text(path, j.dump(2) + "\n");
}

void write_ensemble_json(const EnsembleSummary& summary, const ScenarioConfig& config,
                         const std::string& path) {
    json j;
    j["scenario"] = summary.scenario_name;
    j["members"] = summary.members;
    j["failures"] = summary.failures;
    j["seed"] = config.seed;
    j["years"] = summary.years;
    j["emissions_rate_t_per_y"] = band_to_json(summary.emissions_rate);
    j["emissions_cumulative_t"] = band_to_json(summary.emissions_cumulative);
    j["avg_lcoe_usd_mwh"] = band_to_json(summary.avg_lcoe);
    j["total_generation_gwh"] = band_to_json(summary.total_generation_gwh);
    json cap, gen;
    for (std::size_t i = 0; i < summary.tech_ids.size(); ++i) {
        cap[summary.tech_ids[i]] = band_to_json(summary.capacity_gw[i]);
        gen[summary.tech_ids[i]] = band_to_json(summary.generation_gwh[i]);
    }
    j["capacity_gw"] = std::move(cap);
    j["generation_gwh"] = std::move(gen);
    write_text(path, j.dump(2) + "\n");
}

}  // namespace ftt

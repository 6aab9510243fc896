#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ftt/accounting.hpp"
#include "ftt/costs.hpp"
#include "ftt/dynamics.hpp"
#include "ftt/resources.hpp"
#include "ftt/techdata.hpp"

namespace ftt {

// Default time-scaling constant of the substitution matrix, calibrated so
// that a decisive cost advantage between two technologies with a 40 year
// lifetime and 4 year expansion time produces a 50 year changeover.
double default_k_scale();

enum class FuelPriceMode { Table, Curve, MaxTableCurve };

FuelPriceMode fuel_price_mode_from_string(const std::string& s);
std::string to_string(FuelPriceMode m);

struct PiecewiseSeries {
    std::vector<double> years;
    std::vector<double> values;

    // Linear interpolation, clamped to the end values outside the range.
    double at(double year) const;
};

struct CarbonPricePath {
    // Either explicit points, or an initial price growing exponentially.
    PiecewiseSeries points;        // used when non-empty
    double initial = 0.0;          // $/tCO2
    double growth_per_year = 0.0;  // fractional, e.g. 0.01 for +1%/y

    double at(double year, double start_year) const;
};

struct ScenarioConfig {
    std::string name;
    double start_year = 0.0;
    double end_year = 0.0;
    double dt = 0.25;
    PiecewiseSeries demand;  // GWh/y
    CarbonPricePath carbon_price;
    double discount_rate = 0.10;
    GridParams grid;
    double k_scale = 0.0;  // filled with default_k_scale() when omitted
    double gate_softness = 0.05;
    std::vector<std::pair<std::string, double>> initial_shares;  // tech id -> share
    std::uint64_t seed = 0;
    FuelPriceMode fuel_price_mode = FuelPriceMode::Table;
};

// Parses and validates a scenario config document (JSON text). Unknown keys
// are rejected with their full key path. Defaults are documented in the
// README.
ScenarioConfig parse_config(const std::string& document_text);
ScenarioConfig load_config(const std::string& path);

struct ModelData {
    TechnologyRegistry registry;
    SpilloverMatrix spillover;
    ResourceSet resources;
};

// Loads technologies.json and resources.json from a data directory and
// validates resource links.
ModelData load_model_data(const std::string& data_dir);

struct StepRecord {
    double year = 0.0;
    std::vector<double> shares;
    std::vector<double> capacity_gw;
    std::vector<double> generation_gwh;
    std::vector<double> investment_musd;     // M$/y
    std::vector<double> lcoe_usd_mwh;        // medians
    std::vector<double> emissions_by_tech;   // tCO2/y
    double emissions_rate = 0.0;             // tCO2/y
    double emissions_cumulative = 0.0;       // tCO2
    double avg_lcoe = 0.0;                   // $/MWh
    double cf_bar = 0.0;
    double u_tot_gw = 0.0;
    double carbon_price = 0.0;
    std::array<double, 3> constraint_slack{};
};

struct SimulationOutput {
    std::string scenario_name;
    std::vector<std::string> tech_ids;
    std::vector<StepRecord> steps;
    bool halted_early = false;
    std::string diagnostic;
};

using StepObserver = std::function<void(const StepRecord&)>;

// Runs one deterministic scenario. Per step: resource marginal costs, the
// levelised cost of every technology, grid share limits, the shares step,
// capacity/investment/emissions accounting, learning accumulation, and
// resource depletion. Halts with a diagnostic (partial output, halted_early
// set) when a stock resource is exhausted.
SimulationOutput run(const ScenarioConfig& config, const ModelData& data,
                     const StepObserver& observer = {});

struct QuantileBand {
    std::vector<double> q_low;   // 2.5%
    std::vector<double> median;  // 50%
    std::vector<double> q_high;  // 97.5%
};

struct EnsembleSummary {
    std::string scenario_name;
    std::vector<std::string> tech_ids;
    std::vector<double> years;
    int members = 0;
    int failures = 0;
    QuantileBand emissions_rate;
    QuantileBand emissions_cumulative;
    QuantileBand avg_lcoe;
    QuantileBand total_generation_gwh;
    std::vector<QuantileBand> capacity_gw;      // per tech
    std::vector<QuantileBand> generation_gwh;   // per tech
};

// Monte-Carlo ensemble over resource-assessment uncertainty: each member
// samples one deterministic curve per resource (seeded from config.seed and
// the member index) and runs the scenario. Member failures are counted, not
// fatal. Deterministic given (config.seed, n).
EnsembleSummary run_ensemble(const ScenarioConfig& config, const ModelData& data,
                             int n_members);

// Tabular series: one row per (year, technology), columns exactly
// [year, tech_id, share, capacity_GW, generation_GWh, investment, lcoe,
// emissions_rate].
void write_series_csv(const SimulationOutput& out, const std::string& path);
std::string series_csv(const SimulationOutput& out);

// Structured summary with scenario metadata and, for ensembles, quantile
// bands.
void write_summary_json(const SimulationOutput& out, const ScenarioConfig& config,
                        const std::string& path);
void write_ensemble_json(const EnsembleSummary& summary, const ScenarioConfig& config,
                         const std::string& path);

}  // namespace ftt

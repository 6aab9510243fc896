#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ftt {

// Grid role of a generation technology: constant-output base load plants,
// fast-ramping dispatchable plants, or uncontrollable variable renewables.
enum class GridClass { Base, Flexible, Variable };

GridClass grid_class_from_string(const std::string& s);
std::string to_string(GridClass c);

// Static per-technology parameters. Units are fixed project-wide:
// money in USD, capacity in GW, energy in GWh, emissions in tCO2.
struct TechnologySpec {
    std::string id;
    std::string name;
    double invest_cost = 0.0;      // $/kW, base value before learning
    double fuel_cost = 0.0;        // $/MWh; may be overridden by a resource link
    double om_cost = 0.0;          // $/MWh
    double emission_factor = 0.0;  // tCO2/GWh; negative only for biomass CCS
    double lifetime = 0.0;         // years
    double build_time = 0.0;       // years, industry capacity expansion time scale
    double learning_exponent = 0.0;
    double cost_spread = 0.1;      // relative sd of the levelised cost distribution
    double capacity_factor = 0.0;  // (0, 1]
    GridClass grid_class = GridClass::Base;
    std::string resource_id;       // empty when not resource-linked
    double initial_cumulative_capacity = 0.0;  // GW, learning base stock
    double start_capacity_gw = 0.0;            // GW, nominal starting fleet
    bool allow_negative_emissions = false;
    double decommission_rate = 0.0;  // 1/years, always derived as 1/lifetime
};

struct TechnologyRegistry {
    // Declaration order of the data file, which is also the output order.
    std::vector<TechnologySpec> techs;

    std::size_t size() const { return techs.size(); }
    const TechnologySpec& operator[](std::size_t i) const { return techs[i]; }

    // Throws DataError when the id is unknown.
    std::size_t index_of(const std::string& id) const;
    bool contains(const std::string& id) const;

    // Indices sorted by technology id. Every reduction over technologies in
    // the model iterates in this order, so results are independent of the
    // declaration order of the data file (bit for bit).
    const std::vector<std::size_t>& canonical_order() const { return canonical_; }

    void rebuild_index();

private:
    std::vector<std::size_t> canonical_;
};

// Learning spillover weights B(i,j): the fraction of technology j's capacity
// additions that count towards technology i's cumulative learning stock.
struct SpilloverMatrix {
    std::size_t n = 0;
    std::vector<double> weights;  // row-major, n*n

    double at(std::size_t i, std::size_t j) const { return weights[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return weights[i * n + j]; }

    static SpilloverMatrix identity(std::size_t n);
};

struct SpilloverOverride {
    std::string tech_a;
    std::string tech_b;
    double weight = 0.0;
    bool symmetric = true;
};

struct TechDataFile {
    TechnologyRegistry registry;
    std::vector<SpilloverOverride> spillover_overrides;
};

// Parses and validates a technology data document (JSON text). Every row
// must satisfy the TechnologySpec invariants; failures name the offending
// row. Duplicate ids and empty technology lists are rejected.
TechDataFile parse_tech_data(const std::string& document_text);
TechDataFile load_tech_data(const std::string& path);

// Serialises a registry back to the data-file format. Parsing the result
// yields an identical registry (round-trip stability).
std::string serialize_registry(const TechnologyRegistry& reg,
                               const std::vector<SpilloverOverride>& overrides = {});

// Identity matrix plus symmetric weights for the technology pairs that share
// production know-how: coal and biomass gasification (igcc/bigcc), onshore
// and offshore wind, and ccgt/igcc. Pairs absent from the registry are
// skipped. The default off-diagonal weight is 0.5.
SpilloverMatrix default_spillover(const TechnologyRegistry& reg);

// Applies data-file overrides on top of a spillover matrix.
void apply_spillover_overrides(SpilloverMatrix& m, const TechnologyRegistry& reg,
                               const std::vector<SpilloverOverride>& overrides);

}  // namespace ftt

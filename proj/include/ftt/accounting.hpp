#pragma once

#include <vector>

#include "ftt/dynamics.hpp"
#include "ftt/techdata.hpp"

namespace ftt {

// Capacities and generation implied by a share vector and the demand.
// Capacity factors are stored dimensionless; the 8760 h/y conversion between
// GW and GWh/y is applied exactly where capacity meets energy.
struct PowerState {
    std::vector<double> capacity_gw;      // U_i
    std::vector<double> generation_gwh;   // G_i, GWh/y
    double demand_gwh = 0.0;              // D, GWh/y
    double cf_bar = 0.0;                  // share-weighted capacity factor
    double u_tot_gw = 0.0;
};

// Share-weighted fleet capacity factor, summed in canonical order.
double weighted_capacity_factor(const TechnologyRegistry& reg, const SharesState& state);

// U_i = S_i * D / (cf_bar * 8760), G_i = U_i * CF_i * 8760. Generation sums
// to demand exactly. Throws ModelError when no generating technology is
// present (cf_bar == 0) or demand is negative.
PowerState capacities(const TechnologyRegistry& reg, const SharesState& state,
                      double demand_gwh);

// Investment flows in M$/y (equivalently $/kW * GW/y): capacity growth plus
// replacement of retiring units when the fleet grows, replacement only when
// it is flat or shrinking.
std::vector<double> investment(const TechnologyRegistry& reg,
                               const std::vector<double>& prev_capacity_gw,
                               const std::vector<double>& new_capacity_gw, double dt,
                               const std::vector<double>& unit_cost_per_kw);

// Sum over technologies of emission factor times generation, tCO2/y.
// Negative factors (biomass CCS) contribute negative emissions.
double emissions_rate(const TechnologyRegistry& reg,
                      const std::vector<double>& generation_gwh);

std::vector<double> emissions_by_tech(const TechnologyRegistry& reg,
                                      const std::vector<double>& generation_gwh);

// Trapezoid advance of cumulative emissions, tCO2.
double advance_cumulative_emissions(double prev_cumulative, double prev_rate,
                                    double rate, double dt);

// Share-weighted mean of the levelised cost medians, $/MWh. This is the
// sector marginal production cost from which an electricity price would be
// derived downstream.
double average_lcoe(const TechnologyRegistry& reg, const SharesState& state,
                    const std::vector<double>& lcoe_median);

}  // namespace ftt

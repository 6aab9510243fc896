#pragma once

#include <cstddef>
#include <vector>

#include "ftt/techdata.hpp"

namespace ftt {

constexpr double kHoursPerYear = 8760.0;

// A levelised cost treated as a normal distribution: the median reflects the
// average recent project, the spread the site-to-site scatter investors see.
struct CostDistribution {
    double median = 0.0;  // $/MWh
    double spread = 0.0;  // $/MWh, standard deviation, always > 0
};

// Standard normal CDF.
double normal_cdf(double z);

// Levelised cost of electricity: discounted lifetime costs divided by
// discounted lifetime production, per kW of capacity, summed over years
// 0..lifetime inclusive. Capital is charged entirely at year 0; O&M, fuel
// and carbon costs accrue per MWh produced. The carbon term is
// emission_factor [t/GWh] * carbon_price [$/t] / 1000, negative for
// negative-emission technologies (allowance income).
CostDistribution lcoe(const TechnologySpec& spec, double learned_invest_cost,
                      double fuel_price, double carbon_price, double discount_rate);

// Probability that a cost draw of `a` comes out below a draw of `b`, with
// independent normal distributions. Strictly inside (0,1) for finite
// medians, and preference(a,b) + preference(b,a) == 1.
double preference(const CostDistribution& a, const CostDistribution& b);

// Cumulative learning stocks. Costs decline as a power law of the stock
// relative to its starting value.
struct LearningState {
    std::vector<double> cumulative_capacity;  // GW, never decreases
    std::vector<double> base_capacity;        // GW, stock at t = 0
    std::vector<double> base_cost;            // $/kW, invest cost at t = 0
    std::vector<double> exponent;
};

LearningState make_learning_state(const TechnologyRegistry& reg);

// Advances learning stocks by one step. Gross positive additions of
// technology j are max(dU_j, 0) plus replacement builds delta_j * U_j * dt;
// replacements count towards learning even when the fleet is flat or
// shrinking. Additions propagate through the spillover matrix.
LearningState accumulate_capacity(const LearningState& state,
                                  const SpilloverMatrix& spillover,
                                  const TechnologyRegistry& reg,
                                  const std::vector<double>& capacity_change_gw,
                                  const std::vector<double>& capacity_start_gw,
                                  double dt);

// Experience-curve cost: base_cost * (W / W0)^(-b). Requires W0 > 0.
double learned_cost(const LearningState& state, std::size_t tech);

}  // namespace ftt

#include "ftt/accounting.hpp"

#include <cmath>

#include "ftt/errors.hpp"

namespace ftt {

double weighted_capacity_factor(const TechnologyRegistry& reg, const SharesState& state) {
    double cf = 0.0;
    for (std::size_t k : reg.canonical_order()) {
        cf += state.shares[k] * reg[k].capacity_factor;
    }
    return cf;
}

PowerState capacities(const TechnologyRegistry& reg, const SharesState& state,
                      double demand_gwh) {
    if (demand_gwh < 0.0) throw ModelError("capacities: negative demand");
    const std::size_t n = reg.size();
    PowerState p;
    p.demand_gwh = demand_gwh;
    p.cf_bar = weighted_capacity_factor(reg, state);
    if (!(p.cf_bar > 0.0)) {
        throw ModelError("capacities: no generating technology (cf_bar = 0)");
    }
    p.capacity_gw.resize(n);
    p.generation_gwh.resize(n);
    // The conversion between GW and GWh/y rides on the average capacity
    // factor: U_i = S_i D / (cf_bar * 8760). Generation then sums back to
    // the demand identically.
    const double u_per_share = demand_gwh / (p.cf_bar * kHoursPerYear);
    for (std::size_t i = 0; i < n; ++i) {
        p.capacity_gw[i] = state.shares[i] * u_per_share;
        p.generation_gwh[i] = p.capacity_gw[i] * reg[i].capacity_factor * kHoursPerYear;
    }
    for (std::size_t k : reg.canonical_order()) {
        p.u_tot_gw += p.capacity_gw[k];
    }
    return p;
}

std::vector<double> investment(const TechnologyRegistry& reg,
                               const std::vector<double>& prev_capacity_gw,
                               const std::vector<double>& new_capacity_gw, double dt,
                               const std::vector<double>& unit_cost_per_kw) {
    if (!(dt > 0.0)) throw ModelError("investment: dt must be > 0");
    const std::size_t n = reg.size();
    std::vector<double> inv(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double growth = (new_capacity_gw[i] - prev_capacity_gw[i]) / dt;
        const double replacement = reg[i].decommission_rate * prev_capacity_gw[i];
        // $/kW times GW/y lands on M$/y.
        const double build_rate = growth > 0.0 ? growth + replacement : replacement;
        inv[i] = unit_cost_per_kw[i] * build_rate;
    }
    return inv;
}

double emissions_rate(const TechnologyRegistry& reg,
                      const std::vector<double>& generation_gwh) {
    double rate = 0.0;
    for (std::size_t k : reg.canonical_order()) {
        rate += reg[k].emission_factor * generation_gwh[k];
    }
    return rate;
}

std::vector<double> emissions_by_tech(const TechnologyRegistry& reg,
                                      const std::vector<double>& generation_gwh) {
    std::vector<double> e(reg.size());
    for (std::size_t i = 0; i < reg.size(); ++i) {
        e[i] = reg[i].emission_factor * generation_gwh[i];
    }
    return e;
}

double advance_cumulative_emissions(double prev_cumulative, double prev_rate,
                                    double rate, double dt) {
    return prev_cumulative + 0.5 * (prev_rate + rate) * dt;
}

double average_lcoe(const TechnologyRegistry& reg, const SharesState& state,
                    const std::vector<double>& lcoe_median) {
    double avg = 0.0;
    for (std::size_t k : reg.canonical_order()) {
        avg += state.shares[k] * lcoe_median[k];
    }
    return avg;
}

}  // namespace ftt

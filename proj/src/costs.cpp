#include "ftt/costs.hpp"

#include <algorithm>
#include <cmath>

#include "ftt/errors.hpp"

namespace ftt {

namespace {

constexpr double kMwhPerGwh = 1000.0;
constexpr double kMinSpread = 1e-6;

// Sum of (1+r)^-t for t = 0..years inclusive.
double discount_sum(double discount_rate, double years) {
    const int n = static_cast<int>(std::llround(years));
    if (discount_rate == 0.0) return n + 1.0;
    const double q = 1.0 / (1.0 + discount_rate);
    return (1.0 - std::pow(q, n + 1)) / (1.0 - q);
}

}  // namespace

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

CostDistribution lcoe(const TechnologySpec& spec, double learned_invest_cost,
                      double fuel_price, double carbon_price, double discount_rate) {
    for (double v : {learned_invest_cost, fuel_price, carbon_price, discount_rate}) {
        if (!std::isfinite(v)) throw ModelError("lcoe: non-finite input for '" + spec.id + "'");
    }
    if (discount_rate < 0.0) throw ModelError("lcoe: negative discount rate");

    // Per kW of capacity and per year of operation.
    const double ep_mwh = spec.capacity_factor * kHoursPerYear / 1000.0;
    const double carbon_cost = spec.emission_factor * carbon_price / kMwhPerGwh;
    const double per_mwh = spec.om_cost + fuel_price + carbon_cost;
    const double dsum = discount_sum(discount_rate, spec.lifetime);

    CostDistribution d;
    d.median = per_mwh + learned_invest_cost / (ep_mwh * dsum);
    d.spread = std::max(spec.cost_spread * std::fabs(d.median), kMinSpread);
    return d;
}

double preference(const CostDistribution& a, const CostDistribution& b) {
    const double sd = std::sqrt(a.spread * a.spread + b.spread * b.spread);
    const double p = normal_cdf(-(a.median - b.median) / sd);
    // Strictly inside (0,1): erfc underflows for very lopsided comparisons.
    const double lo = 1e-16;
    return std::clamp(p, lo, 1.0 - lo);
}

LearningState make_learning_state(const TechnologyRegistry& reg) {
    LearningState s;
    const std::size_t n = reg.size();
    s.cumulative_capacity.resize(n);
    s.base_capacity.resize(n);
    s.base_cost.resize(n);
    s.exponent.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(reg[i].initial_cumulative_capacity > 0.0)) {
            throw DataError("technology '" + reg[i].id +
                            "': initial_cumulative_capacity must be > 0 for learning");
        }
        s.cumulative_capacity[i] = reg[i].initial_cumulative_capacity;
        s.base_capacity[i] = reg[i].initial_cumulative_capacity;
        s.base_cost[i] = reg[i].invest_cost;
        s.exponent[i] = reg[i].learning_exponent;
    }
    return s;
}

LearningState accumulate_capacity(const LearningState& state,
                                  const SpilloverMatrix& spillover,
                                  const TechnologyRegistry& reg,
                                  const std::vector<double>& capacity_change_gw,
                                  const std::vector<double>& capacity_start_gw,
                                  double dt) {
    if (!(dt > 0.0)) throw ModelError("accumulate_capacity: dt must be > 0");
    const std::size_t n = reg.size();
    const auto& ord = reg.canonical_order();

    // Gross positive additions: net growth when positive, plus replacement
    // of units retiring during the step. A flat or shrinking fleet still
    // builds replacements, and those builds still teach.
    std::vector<double> additions(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double growth = std::max(capacity_change_gw[j], 0.0);
        additions[j] = growth + reg[j].decommission_rate * capacity_start_gw[j] * dt;
    }

    LearningState next = state;
    for (std::size_t i = 0; i < n; ++i) {
        double dw = 0.0;
        for (std::size_t k : ord) {
            dw += spillover.at(i, k) * additions[k];
        }
        next.cumulative_capacity[i] += dw;
    }
    return next;
}

double learned_cost(const LearningState& state, std::size_t tech) {
    const double w0 = state.base_capacity[tech];
    if (!(w0 > 0.0)) throw ModelError("learned_cost: base capacity is zero");
    const double ratio = state.cumulative_capacity[tech] / w0;
    return state.base_cost[tech] * std::pow(ratio, -state.exponent[tech]);
}

}  // namespace ftt

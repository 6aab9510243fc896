#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ftt/costs.hpp"
#include "ftt/techdata.hpp"

namespace ftt {

// Market shares of generation capacity. Non-negative, summing to one.
struct SharesState {
    std::vector<double> shares;

    double sum() const;
    void validate(double tol = 1e-9) const;  // throws ModelError
};

// Substitution frequencies. rate(i, j) is the coefficient of the share flow
// from j into i: K / (lifetime_j * build_time_i). Losers free capacity at
// their decommission rate 1/tau_j and the gainer absorbs it at its industry
// expansion rate 1/t_i, so the matrix is not symmetric whenever the time
// constants differ.
struct SubstitutionMatrix {
    std::size_t n = 0;
    double k_scale = 1.0;
    std::vector<double> rates;  // row-major, n*n

    double rate(std::size_t i, std::size_t j) const { return rates[i * n + j]; }

    static SubstitutionMatrix uniform(std::size_t n, double value);
};

SubstitutionMatrix substitution_matrix(const TechnologyRegistry& reg, double k_scale);

// Calibration helper: the K that makes a full-preference changeover between
// two technologies with the given time constants complete (1% to 99%) in
// `target_years`.
double calibrate_k(double lifetime, double build_time, double target_years);

// Grid flexibility parameters. The daily demand peak is carried as a
// fraction of total capacity so it scales with the system; the peak energy
// defaults to the value consistent with a sinusoidal daily profile of that
// height and is only stored when configured explicitly.
struct GridParams {
    double peak_height_fraction = 0.3;   // (peak - trough) of daily demand / U_tot
    double peak_energy_gwh = -1.0;       // GWh/day above average; < 0 -> derived
    double storage_power_gw = 0.0;
    double storage_energy_gwh = 0.0;
    double day_length_h = 24.0;

    // Energy above the average daily demand, GWh/day.
    double peak_energy(double u_tot_gw) const;
};

// Per-technology share bounds derived from the grid constraints (or imposed
// directly). Absent optional -> unconstrained in that direction.
struct ShareLimits {
    std::vector<std::optional<double>> upper;
    std::vector<std::optional<double>> lower;

    static ShareLimits none(std::size_t n);
};

// Aggregates the share-limit algebra needs: total capacity, fleet-average
// capacity factor and the per-class share and capacity-factor sums.
struct CapacityStats {
    double u_tot_gw = 0.0;
    double cf_bar = 0.0;
    double s_base = 0.0, s_flex = 0.0, s_var = 0.0;
    double cf_flex = 0.0, cf_var = 0.0;  // class-average capacity factors
    double gen_share_flex = 0.0, gen_share_var = 0.0;  // sum of S_i * CF_i per class
};

CapacityStats capacity_stats(const TechnologyRegistry& reg, const SharesState& state,
                             double u_tot_gw, double cf_bar);

// Share limits from the grid constraints: flexible technologies get a lower
// limit, variable renewables an upper limit from the flexibility balance,
// and base plus variable technologies an upper limit from the minimum daily
// demand. Where two upper limits apply, the most constraining is kept. Each
// limit has the technology's own share added back, and is clamped to [0,1].
ShareLimits share_limits(const SharesState& state, const GridParams& grid,
                         const TechnologyRegistry& reg, const CapacityStats& stats);

enum class LimitKind { Upper, Lower };

// Smooth probability of investing given a share limit: ~1 well inside the
// allowed region, 1/2 at the limit, ~0 past it. Investors shy away from
// assets at risk of being stranded before the constraint is strictly hit,
// hence a cumulative curve rather than a hard wall. The logistic scale is
// softness/10 so that a capped share overshoots its limit by less than
// `softness` over any realistic horizon.
double limit_gate(double share, double limit, LimitKind kind, double softness);

// Net share flow from j into i over dt, before summation; antisymmetric
// under exchange of i and j. Exposed for tests.
double pair_flow(const SharesState& state, const std::vector<CostDistribution>& costs,
                 const SubstitutionMatrix& a, const ShareLimits& limits,
                 double gate_softness, double dt, std::size_t i, std::size_t j);

// One explicit Euler step of the shares equation with gated flows. Pairs are
// visited in canonical id order, so trajectories do not depend on the
// declaration order of technologies. Negative shares arising from an
// oversized step are clamped and the deficit taken back from the gainers in
// proportion to their positive flows. Throws ModelError when any |dS| > 0.5
// (the step size must be reduced).
SharesState shares_step(const TechnologyRegistry& reg, const SharesState& state,
                        const std::vector<CostDistribution>& costs,
                        const SubstitutionMatrix& a, const ShareLimits& limits,
                        double gate_softness, double dt);

struct ConstraintReport {
    int index = 0;        // 1..3
    double slack = 0.0;   // negative when violated
    std::string description;
};

// Evaluates the three grid-stability inequalities literally and reports each
// one violated beyond `tolerance` with its slack:
//   1. flexible + variable generation covers the fluctuating part of demand,
//   2. flexible capacity covers the daily peak plus all variable capacity,
//   3. base + variable capacity stays below the lowest daily demand.
std::vector<ConstraintReport> check_constraints(const SharesState& state,
                                                const GridParams& grid,
                                                const TechnologyRegistry& reg,
                                                const CapacityStats& stats,
                                                double demand_gwh_y,
                                                double tolerance = 0.0);

// Slacks of the three inequalities in order (positive = satisfied).
std::array<double, 3> constraint_slacks(const SharesState& state, const GridParams& grid,
                                        const TechnologyRegistry& reg,
                                        const CapacityStats& stats, double demand_gwh_y);

}  // namespace ftt

#include "ftt/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "ftt/errors.hpp"

namespace ftt {

namespace {

constexpr double kDaysPerYear = 365.0;  // 8760 h/y at a 24 h day

// Gate steepness relative to the softness parameter. The sharper internal
// scale keeps the total overshoot past a limit below one softness width
// while the gate still reads 1/2 exactly at the limit.
constexpr double kGateSharpness = 10.0;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double SharesState::sum() const {
    double s = 0.0;
    for (double v : shares) s += v;
    return s;
}

void SharesState::validate(double tol) const {
    for (double v : shares) {
        if (!(v >= 0.0)) throw ModelError("share out of range");
    }
    if (std::fabs(sum() - 1.0) > tol) {
        throw ModelError("shares do not sum to one");
    }
}

SubstitutionMatrix SubstitutionMatrix::uniform(std::size_t n, double value) {
    SubstitutionMatrix m;
    m.n = n;
    m.k_scale = value;
    m.rates.assign(n * n, value);
    return m;
}

SubstitutionMatrix substitution_matrix(const TechnologyRegistry& reg, double k_scale) {
    const std::size_t n = reg.size();
    SubstitutionMatrix m;
    m.n = n;
    m.k_scale = k_scale;
    m.rates.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(reg[i].lifetime > 0.0) || !(reg[i].build_time > 0.0)) {
            throw DataError("technology '" + reg[i].id +
                            "': zero lifetime or build time");
        }
    }
    // rate(i, j) drives the flow j -> i: j's fleet turns over at 1/tau_j and
    // i absorbs the replacement builds at its expansion rate 1/t_i.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m.rates[i * n + j] = k_scale / (reg[j].lifetime * reg[i].build_time);
        }
    }
    return m;
}

double calibrate_k(double lifetime, double build_time, double target_years) {
    // A full-preference changeover follows a plain logistic with rate
    // K/(tau*t); 1% to 99% spans 2*ln(99) rate units.
    return 2.0 * std::log(99.0) * lifetime * build_time / target_years;
}

double GridParams::peak_energy(double u_tot_gw) const {
    if (peak_energy_gwh >= 0.0) return peak_energy_gwh;
    // Sinusoidal daily profile with peak-to-trough height f*U_tot: the
    // energy above the daily average is height * T_D / (2*pi).
    const double height_gw = peak_height_fraction * u_tot_gw;
    return height_gw * day_length_h / (2.0 * M_PI);
}

ShareLimits ShareLimits::none(std::size_t n) {
    ShareLimits l;
    l.upper.assign(n, std::nullopt);
    l.lower.assign(n, std::nullopt);
    return l;
}

CapacityStats capacity_stats(const TechnologyRegistry& reg, const SharesState& state,
                             double u_tot_gw, double cf_bar) {
    CapacityStats st;
    st.u_tot_gw = u_tot_gw;
    st.cf_bar = cf_bar;
    for (std::size_t k : reg.canonical_order()) {
        const double s = state.shares[k];
        const double scf = s * reg[k].capacity_factor;
        switch (reg[k].grid_class) {
            case GridClass::Base:
                st.s_base += s;
                break;
            case GridClass::Flexible:
                st.s_flex += s;
                st.gen_share_flex += scf;
                break;
            case GridClass::Variable:
                st.s_var += s;
                st.gen_share_var += scf;
                break;
        }
    }
    st.cf_flex = st.s_flex > 0.0 ? st.gen_share_flex / st.s_flex : 0.0;
    st.cf_var = st.s_var > 0.0 ? st.gen_share_var / st.s_var : 0.0;
    return st;
}

ShareLimits share_limits(const SharesState& state, const GridParams& grid,
                         const TechnologyRegistry& reg, const CapacityStats& stats) {
    const std::size_t n = reg.size();
    if (!(stats.u_tot_gw > 0.0)) throw ModelError("share_limits: U_tot must be > 0");
    ShareLimits limits = ShareLimits::none(n);

    const double peak = grid.peak_height_fraction - grid.storage_power_gw / stats.u_tot_gw;
    // Flexibility balance: S_Flex - S_Var >= peak. Solved for the own share
    // of each technology, with the i-th contribution added back.
    const double flex_gap = peak + stats.s_var - stats.s_flex;
    // Minimum daily demand: S_Base + S_Var <= cf_bar - peak_height/2 + storage.
    const double base_room = stats.cf_bar - 0.5 * grid.peak_height_fraction +
                             grid.storage_power_gw / stats.u_tot_gw -
                             stats.s_base - stats.s_var;

    auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };

    for (std::size_t i = 0; i < n; ++i) {
        const double s = state.shares[i];
        switch (reg[i].grid_class) {
            case GridClass::Flexible:
                limits.lower[i] = clamp01(flex_gap + s);
                break;
            case GridClass::Variable: {
                const double from_flex = -flex_gap + s;
                const double from_base = base_room + s;
                // The most constraining of both upper limits is taken.
                limits.upper[i] = clamp01(std::min(from_flex, from_base));
                break;
            }
            case GridClass::Base:
                limits.upper[i] = clamp01(base_room + s);
                break;
        }
    }
    return limits;
}

double limit_gate(double share, double limit, LimitKind kind, double softness) {
    if (!(softness > 0.0)) throw ModelError("limit_gate: softness must be > 0");
    const double scale = softness / kGateSharpness;
    const double distance = kind == LimitKind::Upper ? limit - share : share - limit;
    return logistic(distance / scale);
}

namespace {

struct Gates {
    std::vector<double> upper;  // probability of investing, 1 when unconstrained
    std::vector<double> lower;  // probability of divesting, 1 when unconstrained
};

Gates make_gates(const SharesState& state, const ShareLimits& limits, double softness) {
    const std::size_t n = state.shares.size();
    Gates g;
    g.upper.assign(n, 1.0);
    g.lower.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (limits.upper[i]) {
            g.upper[i] = limit_gate(state.shares[i], *limits.upper[i], LimitKind::Upper,
                                    softness);
        }
        if (limits.lower[i]) {
            g.lower[i] = limit_gate(state.shares[i], *limits.lower[i], LimitKind::Lower,
                                    softness);
        }
    }
    return g;
}

// Net flow j -> i for one pair. Near an upper limit shares cannot flow into
// a category but can still flow away; near a lower limit they cannot flow
// away but can still flow in.
double pair_flow_gated(const SharesState& state,
                       const std::vector<CostDistribution>& costs,
                       const SubstitutionMatrix& a, const Gates& g, double dt,
                       std::size_t i, std::size_t j) {
    const double ss = state.shares[i] * state.shares[j];
    if (ss == 0.0) return 0.0;
    const double f_i = preference(costs[i], costs[j]);
    const double f_j = 1.0 - f_i;
    const double gain = a.rate(i, j) * f_i * g.upper[i] * g.lower[j];
    const double loss = a.rate(j, i) * f_j * g.upper[j] * g.lower[i];
    return ss * (gain - loss) * dt;
}

}  // namespace

double pair_flow(const SharesState& state, const std::vector<CostDistribution>& costs,
                 const SubstitutionMatrix& a, const ShareLimits& limits,
                 double gate_softness, double dt, std::size_t i, std::size_t j) {
    Gates g = make_gates(state, limits, gate_softness);
    return pair_flow_gated(state, costs, a, g, dt, i, j);
}

SharesState shares_step(const TechnologyRegistry& reg, const SharesState& state,
                        const std::vector<CostDistribution>& costs,
                        const SubstitutionMatrix& a, const ShareLimits& limits,
                        double gate_softness, double dt) {
    if (!(dt > 0.0)) throw ModelError("shares_step: dt must be > 0");
    const std::size_t n = state.shares.size();
    const auto& ord = reg.canonical_order();

    const Gates gates = make_gates(state, limits, gate_softness);

    // Pairwise exchanges accumulated in canonical order; each flow enters
    // the gainer and the loser with opposite signs, so total shares are
    // conserved by construction.
    std::vector<double> delta(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        const std::size_t i = ord[p];
        for (std::size_t q = p + 1; q < n; ++q) {
            const std::size_t j = ord[q];
            const double flow = pair_flow_gated(state, costs, a, gates, dt, i, j);
            delta[i] += flow;
            delta[j] -= flow;
        }
    }

    for (std::size_t k : ord) {
        if (std::fabs(delta[k]) > 0.5) {
            throw ModelError("shares_step: |dS| exceeded 0.5 for '" + reg[k].id +
                             "'; reduce dt");
        }
    }

    SharesState next;
    next.shares.resize(n);
    double deficit = 0.0;
    double positive_flow = 0.0;
    for (std::size_t k : ord) {
        const double s = state.shares[k] + delta[k];
        if (s < 0.0) {
            deficit += -s;
            next.shares[k] = 0.0;
        } else {
            next.shares[k] = s;
        }
        if (delta[k] > 0.0) positive_flow += delta[k];
    }
    if (deficit > 0.0 && positive_flow > 0.0) {
        // Take the clamped mass back from the gainers, in proportion to what
        // they received this step.
        for (std::size_t k : ord) {
            if (delta[k] > 0.0) {
                next.shares[k] -= deficit * (delta[k] / positive_flow);
            }
        }
    }
    return next;
}

std::array<double, 3> constraint_slacks(const SharesState& state, const GridParams& grid,
                                        const TechnologyRegistry& reg,
                                        const CapacityStats& stats, double demand_gwh_y) {
    (void)state;
    (void)reg;
    const double u_tot = stats.u_tot_gw;
    const double us_frac = grid.storage_power_gw / u_tot;
    const double demand_gwh_day = demand_gwh_y / kDaysPerYear;
    const double u_var_gw = stats.s_var * u_tot;

    // 1. Energy balance: flexible plus variable generation must cover the
    //    fluctuating part of the daily demand plus the energy the variable
    //    fleet may fail to deliver, less what storage provides.
    const double rhs1 = stats.cf_bar *
                        (grid.peak_energy(u_tot) / demand_gwh_day +
                         u_var_gw * grid.day_length_h / demand_gwh_day -
                         grid.storage_energy_gwh / demand_gwh_day);
    const double slack1 = stats.gen_share_flex + stats.gen_share_var - rhs1;

    // 2. Capacity balance: flexible capacity covers the daily peak and the
    //    whole variable fleet for when the resource is absent.
    const double slack2 =
        stats.s_flex - stats.s_var - (grid.peak_height_fraction - us_frac);

    // 3. Base load bound: constant-output plus variable capacity cannot
    //    exceed the lowest daily demand.
    const double slack3 = stats.cf_bar - 0.5 * grid.peak_height_fraction + us_frac -
                          (stats.s_base + stats.s_var);

    return {slack1, slack2, slack3};
}

std::vector<ConstraintReport> check_constraints(const SharesState& state,
                                                const GridParams& grid,
                                                const TechnologyRegistry& reg,
                                                const CapacityStats& stats,
                                                double demand_gwh_y, double tolerance) {
    const auto slacks = constraint_slacks(state, grid, reg, stats, demand_gwh_y);
    static const char* kDescriptions[3] = {
        "flexible + variable generation below the fluctuating demand share",
        "flexible capacity below the daily peak plus variable capacity",
        "base + variable capacity above the lowest daily demand",
    };
    std::vector<ConstraintReport> reports;
    for (int i = 0; i < 3; ++i) {
        if (slacks[i] < -tolerance) {
            reports.push_back({i + 1, slacks[i], kDescriptions[i]});
        }
    }
    return reports;
}

}  // namespace ftt

#include "ftt/democases.hpp"

#include <cmath>
#include <cstdio>

#include "ftt/dynamics.hpp"

namespace ftt {

namespace {

// Four otherwise identical technologies competing on constant costs, with
// unit substitution frequencies. Spread is 10% of the cheapest cost for all,
// so the distributions share one profile and only the medians differ.
TechnologyRegistry demo_registry() {
    TechnologyRegistry reg;
    for (int i = 1; i <= 4; ++i) {
        TechnologySpec t;
        t.id = "tech" + std::to_string(i);
        t.name = t.id;
        t.lifetime = 1.0;
        t.build_time = 1.0;
        t.capacity_factor = 1.0;
        t.cost_spread = 0.1;
        t.initial_cumulative_capacity = 1.0;
        t.decommission_rate = 1.0;
        reg.techs.push_back(std::move(t));
    }
    reg.rebuild_index();
    return reg;
}

}  // namespace

DemoTrajectory run_demo_case(DemoCase which, double dt, double horizon,
                             double gate_softness) {
    const TechnologyRegistry reg = demo_registry();
    const SubstitutionMatrix a = SubstitutionMatrix::uniform(4, 1.0);

    const double sigma = 0.1;  // identical profiles around differing medians
    std::vector<CostDistribution> costs = {
        {1.30, sigma}, {1.10, sigma}, {1.05, sigma}, {1.00, sigma}};

    SharesState state;
    state.shares = which == DemoCase::B ? std::vector<double>{0.69, 0.29, 0.01, 0.01}
                                        : std::vector<double>{0.97, 0.01, 0.01, 0.01};

    ShareLimits limits = ShareLimits::none(4);
    if (which == DemoCase::C || which == DemoCase::D) {
        limits.upper[2] = 0.20;
        limits.upper[3] = 0.30;
    }
    if (which == DemoCase::D) {
        limits.lower[0] = 0.40;
    }

    DemoTrajectory traj;
    const long n_steps = std::lround(horizon / dt);
    traj.time.reserve(n_steps + 1);
    traj.shares.reserve(n_steps + 1);

    auto record = [&](double t) {
        traj.time.push_back(t);
        traj.shares.push_back({state.shares[0], state.shares[1], state.shares[2],
                               state.shares[3]});
    };
    record(0.0);
    for (long k = 0; k < n_steps; ++k) {
        state = shares_step(reg, state, costs, a, limits, gate_softness, dt);
        record(static_cast<double>(k + 1) * dt);
    }
    return traj;
}

std::string demo_case_csv(const DemoTrajectory& t) {
    std::string csv = "time,S1,S2,S3,S4\n";
    char buf[160];
    for (std::size_t k = 0; k < t.time.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", t.time[k],
                      t.shares[k][0], t.shares[k][1], t.shares[k][2], t.shares[k][3]);
        csv += buf;
    }
    return csv;
}

}  // namespace ftt

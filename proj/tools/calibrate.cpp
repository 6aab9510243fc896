// Calibration helper for the substitution time-scaling constant K.
//
// Simulates a two-technology changeover with a decisive cost advantage and
// reports the 1%-to-99% transition time for a given K, plus the closed-form
// K that hits a target changeover time for given time constants.

#include <cmath>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>

#include "ftt/dynamics.hpp"
#include "ftt/scenario.hpp"

namespace {

double simulate_changeover_years(double k_scale, double lifetime, double build_time) {
    ftt::TechnologyRegistry reg;
    for (int i = 0; i < 2; ++i) {
        ftt::TechnologySpec t;
        t.id = i == 0 ? "incumbent" : "challenger";
        t.lifetime = lifetime;
        t.build_time = build_time;
        t.capacity_factor = 1.0;
        t.initial_cumulative_capacity = 1.0;
        t.decommission_rate = 1.0 / lifetime;
        reg.techs.push_back(std::move(t));
    }
    reg.rebuild_index();

    const auto a = ftt::substitution_matrix(reg, k_scale);
    const auto limits = ftt::ShareLimits::none(2);
    // 10:1 cost advantage for the challenger.
    std::vector<ftt::CostDistribution> costs = {{10.0, 1.0}, {1.0, 0.1}};

    ftt::SharesState s;
    s.shares = {0.99, 0.01};
    const double dt = 0.05;
    double t = 0.0;
    while (s.shares[1] < 0.99 && t < 10000.0) {
        s = ftt::shares_step(reg, s, costs, a, limits, 0.05, dt);
        t += dt;
    }
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Substitution time-constant calibration"};
    double lifetime = 40.0, build_time = 4.0, target = 50.0;
    app.add_option("--lifetime", lifetime, "incumbent lifetime, years");
    app.add_option("--build-time", build_time, "challenger expansion time, years");
    app.add_option("--target-years", target, "desired 1%-99% changeover time");
    CLI11_PARSE(app, argc, argv);

    const double k = ftt::calibrate_k(lifetime, build_time, target);
    std::printf("K = 2 ln(99) * lifetime * build_time / target = %.6f\n", k);
    std::printf("simulated changeover at that K: %.2f years (target %.2f)\n",
                simulate_changeover_years(k, lifetime, build_time), target);
    std::printf("shipped default (lifetime 40, build 4, target 50): %.6f\n",
                ftt::default_k_scale());
    return 0;
}

#pragma once

#include <array>
#include <string>
#include <vector>

namespace ftt {

// Four-technology demonstration of the shares equation with constant costs
// C1 = 1.3, C2 = 1.1, C3 = 1.05, C4 = 1 and unit substitution frequencies.
//   A: shares 97/1/1/1, no limits
//   B: shares 69/29/1/1, no limits
//   C: as A with upper limits of 20% on tech 3 and 30% on tech 4
//   D: as C with an additional lower limit of 40% on tech 1
enum class DemoCase { A, B, C, D };

struct DemoTrajectory {
    std::vector<double> time;                  // natural time units
    std::vector<std::array<double, 4>> shares;
};

DemoTrajectory run_demo_case(DemoCase which, double dt = 0.1, double horizon = 200.0,
                             double gate_softness = 0.05);

std::string demo_case_csv(const DemoTrajectory& t);

}  // namespace ftt

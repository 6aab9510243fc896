#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ftt {

// Stock resources are finite amounts of energy in the ground (GJ); flow
// resources are renewable flows (GWh/y of generation) that are occupied by
// installed capacity and released when it retires.
enum class ResourceKind { Stock, Flow };

ResourceKind resource_kind_from_string(const std::string& s);
std::string to_string(ResourceKind k);

// Cost-ranked resource availability. Grade k supplies `quantity` units at
// `unit_cost` each; costs increase strictly across grades. The marginal cost
// of the next unit is the cost of the grade the exploitation level sits in,
// and extraction beyond the total technical potential is an error. The
// divergence at the potential is represented by a finite cost cap.
struct CostSupplyCurve {
    struct Grade {
        double quantity = 0.0;   // band width, GJ (stock) or GWh/y (flow)
        double unit_cost = 0.0;  // $/GJ (stock) or $/MWh (flow)
    };

    std::string id;
    ResourceKind kind = ResourceKind::Stock;
    std::vector<Grade> grades;
    std::vector<double> cumulative;    // running totals of grade quantities
    double technical_potential = 0.0;  // sum of grade quantities
    double used = 0.0;                 // stock: extracted; flow: occupied
    double cost_cap = 0.0;             // > costliest grade
    double gj_per_mwh = 0.0;           // stock only: fuel energy per MWh generated
};

// Builds a curve from a cost density: a list of (cost, quantity) bins sorted
// by strictly increasing cost with non-negative quantities. Zero-quantity
// bins are dropped. cost_cap <= 0 selects the default of 100x the cheapest
// grade cost.
CostSupplyCurve build_curve(const std::string& id, ResourceKind kind,
                            const std::vector<std::pair<double, double>>& density,
                            double cost_cap = 0.0, double gj_per_mwh = 0.0);

// Cost of extracting one more unit after `at` units are exploited.
// Monotone non-decreasing in `at`; throws ModelError naming the resource
// when at >= technical_potential.
double marginal_cost(const CostSupplyCurve& curve, double at);

// Stock: extraction accumulates, used += amount * duration_years.
// Flow: `amount` is the currently occupied flow; releasing capacity releases
// sites. Throws ModelError (curve unchanged) if the potential would be
// exceeded.
void consume(CostSupplyCurve& curve, double amount, double duration_years);

// Three curves bounding the 95% confidence region of an uncertain resource
// assessment. All three share the same grade structure (quantities).
struct CurveDistribution {
    CostSupplyCurve low;
    CostSupplyCurve central;
    CostSupplyCurve high;
};

// Draws one deterministic curve from the distribution: per grade, a uniform
// factor interpolates between the low and high costs around the central
// value, then strict cost ordering is restored. Same seed, same curve.
CostSupplyCurve sample_curve(const CurveDistribution& dist, std::uint64_t seed);

struct ResourceSet {
    std::vector<CurveDistribution> resources;

    std::size_t size() const { return resources.size(); }
    std::size_t index_of(const std::string& id) const;  // throws DataError
    bool contains(const std::string& id) const;
};

ResourceSet parse_resource_data(const std::string& document_text);
ResourceSet load_resource_data(const std::string& path);

}  // namespace ftt

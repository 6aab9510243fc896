#include "ftt/resources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ftt/errors.hpp"
#include "json_util.hpp"

namespace ftt {

namespace {

using detail::json;

constexpr int kFormatVersion = 1;

void validate_curve(const CostSupplyCurve& c) {
    const std::string where = "resource '" + c.id + "'";
    if (c.grades.empty()) throw DataError(where + ": empty cost density");
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& g : c.grades) {
        if (!(g.quantity > 0.0)) throw DataError(where + ": grade quantity must be > 0");
        if (!(g.unit_cost > prev)) {
            throw DataError(where + ": grade costs must be strictly increasing");
        }
        prev = g.unit_cost;
    }
    if (!(c.cost_cap > c.grades.back().unit_cost)) {
        throw DataError(where + ": cost_cap must exceed the costliest grade");
    }
    if (c.used < 0.0 || c.used > c.technical_potential) {
        throw DataError(where + ": used outside [0, technical_potential]");
    }
}

std::vector<std::pair<double, double>> parse_density(const json& arr,
                                                     const std::string& path) {
    if (!arr.is_array()) throw DataError(path + ": expected an array of [cost, quantity]");
    std::vector<std::pair<double, double>> density;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& bin = arr[i];
        if (!bin.is_array() || bin.size() != 2 || !bin[0].is_number() ||
            !bin[1].is_number()) {
            throw DataError(path + "[" + std::to_string(i) + "]: expected [cost, quantity]");
        }
        density.emplace_back(bin[0].get<double>(), bin[1].get<double>());
    }
    return density;
}

uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform in [-1, 1], from a 53-bit mantissa.
double uniform_pm1(uint64_t& state) {
    return (splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
}

}  // namespace

ResourceKind resource_kind_from_string(const std::string& s) {
    if (s == "stock") return ResourceKind::Stock;
    if (s == "flow") return ResourceKind::Flow;
    throw DataError("unknown resource kind '" + s + "'");
}

std::string to_string(ResourceKind k) {
    return k == ResourceKind::Stock ? "stock" : "flow";
}

CostSupplyCurve build_curve(const std::string& id, ResourceKind kind,
                            const std::vector<std::pair<double, double>>& density,
                            double cost_cap, double gj_per_mwh) {
    if (density.empty()) throw DataError("resource '" + id + "': empty cost density");

    CostSupplyCurve c;
    c.id = id;
    c.kind = kind;
    c.gj_per_mwh = gj_per_mwh;

    double prev_cost = -std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (const auto& [cost, quantity] : density) {
        if (quantity < 0.0) {
            throw DataError("resource '" + id + "': negative bin quantity");
        }
        if (!(cost > prev_cost)) {
            throw DataError("resource '" + id + "': bins not sorted by increasing cost");
        }
        prev_cost = cost;
        if (quantity == 0.0) continue;
        total += quantity;
        c.grades.push_back({quantity, cost});
        c.cumulative.push_back(total);
    }
    if (c.grades.empty()) throw DataError("resource '" + id + "': empty cost density");
    c.technical_potential = total;
    c.cost_cap = cost_cap > 0.0 ? cost_cap : 100.0 * c.grades.front().unit_cost;
    validate_curve(c);
    return c;
}

double marginal_cost(const CostSupplyCurve& curve, double at) {
    if (at < 0.0) throw ModelError("resource '" + curve.id + "': negative quantity");
    if (at >= curve.technical_potential) {
        throw ModelError("resource exhausted: '" + curve.id + "'");
    }
    // Cost of the grade the exploitation level sits in; grade k covers
    // [cumulative[k-1], cumulative[k]).
    auto it = std::upper_bound(curve.cumulative.begin(), curve.cumulative.end(), at);
    std::size_t idx = static_cast<std::size_t>(it - curve.cumulative.begin());
    if (idx >= curve.grades.size()) idx = curve.grades.size() - 1;
    return curve.grades[idx].unit_cost;
}

void consume(CostSupplyCurve& curve, double amount, double duration_years) {
    if (amount < 0.0) throw ModelError("resource '" + curve.id + "': negative consumption");
    double next_used;
    if (curve.kind == ResourceKind::Stock) {
        next_used = curve.used + amount * duration_years;
    } else {
        next_used = amount;  // occupied flow, releases when capacity retires
    }
    if (next_used > curve.technical_potential) {
        throw ModelError("resource exhausted: '" + curve.id + "' (demand " +
                         std::to_string(next_used) + " exceeds potential " +
                         std::to_string(curve.technical_potential) + ")");
    }
    curve.used = next_used;
}

CostSupplyCurve sample_curve(const CurveDistribution& dist, std::uint64_t seed) {
    const CostSupplyCurve& mid = dist.central;
    CostSupplyCurve out = mid;

    uint64_t rng = seed;
    double floor_cost = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < mid.grades.size(); ++k) {
        const double u = uniform_pm1(rng);
        const double lo = dist.low.grades[k].unit_cost;
        const double hi = dist.high.grades[k].unit_cost;
        const double c = mid.grades[k].unit_cost;
        double sampled = u >= 0.0 ? c + u * (hi - c) : c + u * (c - lo);
        // Restore strict ordering across grades; the bound curves are
        // themselves strictly increasing, so the nudge stays within [lo, hi].
        if (sampled <= floor_cost) {
            sampled = std::nextafter(floor_cost, std::numeric_limits<double>::infinity());
        }
        floor_cost = sampled;
        out.grades[k].unit_cost = sampled;
    }
    if (out.cost_cap <= out.grades.back().unit_cost) {
        out.cost_cap = 2.0 * out.grades.back().unit_cost;
    }
    return out;
}

std::size_t ResourceSet::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < resources.size(); ++i) {
        if (resources[i].central.id == id) return i;
    }
    throw DataError("unknown resource id '" + id + "'");
}

bool ResourceSet::contains(const std::string& id) const {
    for (const auto& r : resources) {
        if (r.central.id == id) return true;
    }
    return false;
}

ResourceSet parse_resource_data(const std::string& document_text) {
    json doc = detail::parse_json<DataError>(document_text, "resource data");
    detail::require_object<DataError>(doc, "resource data");
    detail::reject_unknown_keys<DataError>(doc, {"format_version", "resources"},
                                           "resource data");
    detail::check_format_version<DataError>(doc, kFormatVersion, "resource data");

    const json& rows = detail::require_key<DataError>(doc, "resources", "resource data");
    if (!rows.is_array()) throw DataError("resources: expected an array");

    ResourceSet set;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string path = "resources[" + std::to_string(i) + "]";
        const json& row = rows[i];
        detail::require_object<DataError>(row, path);
        detail::reject_unknown_keys<DataError>(
            row,
            {"id", "kind", "grades", "low_grades", "high_grades", "cost_cap",
             "gj_per_mwh", "used"},
            path);

        const std::string id = detail::require_string<DataError>(row, "id", path);
        if (set.contains(id)) throw DataError("duplicate resource id '" + id + "'");
        const ResourceKind kind =
            resource_kind_from_string(detail::require_string<DataError>(row, "kind", path));
        const double cap = detail::number_or<DataError>(row, "cost_cap", 0.0, path);
        const double gj = detail::number_or<DataError>(row, "gj_per_mwh", 0.0, path);
        if (kind == ResourceKind::Stock && !(gj > 0.0)) {
            throw DataError(path + ": stock resources need gj_per_mwh > 0");
        }

        auto central_density =
            parse_density(detail::require_key<DataError>(row, "grades", path), path + ".grades");
        CurveDistribution dist;
        dist.central = build_curve(id, kind, central_density, cap, gj);
        dist.central.used = detail::number_or<DataError>(row, "used", 0.0, path);
        if (dist.central.used < 0.0 || dist.central.used > dist.central.technical_potential) {
            throw DataError(path + ": used outside [0, technical_potential]");
        }

        auto bound_curve = [&](const char* key) -> CostSupplyCurve {
            if (!row.contains(key)) return dist.central;
            auto density = parse_density(row[key], path + "." + key);
            CostSupplyCurve c = build_curve(id, kind, density, cap, gj);
            c.used = dist.central.used;
            return c;
        };
        dist.low = bound_curve("low_grades");
        dist.high = bound_curve("high_grades");

        if (dist.low.grades.size() != dist.central.grades.size() ||
            dist.high.grades.size() != dist.central.grades.size()) {
            throw DataError(path + ": low/central/high must share the grade structure");
        }
        for (std::size_t k = 0; k < dist.central.grades.size(); ++k) {
            if (dist.low.grades[k].quantity != dist.central.grades[k].quantity ||
                dist.high.grades[k].quantity != dist.central.grades[k].quantity) {
                throw DataError(path + ": low/central/high must share grade quantities");
            }
            if (dist.low.grades[k].unit_cost > dist.central.grades[k].unit_cost ||
                dist.central.grades[k].unit_cost > dist.high.grades[k].unit_cost) {
                throw DataError(path + ": requires cost_low <= cost_central <= cost_high");
            }
        }
        set.resources.push_back(std::move(dist));
    }
    return set;
}

ResourceSet load_resource_data(const std::string& path) {
    return parse_resource_data(detail::read_text_file(path));
}

}  // namespace ftt

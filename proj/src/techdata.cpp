#include "ftt/techdata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "ftt/errors.hpp"
#include "json_util.hpp"

namespace ftt {

namespace {

using detail::json;

constexpr int kFormatVersion = 1;

void validate_spec(const TechnologySpec& t) {
    const std::string where = "technology '" + t.id + "'";
    if (t.id.empty()) throw DataError("technology with empty id");
    if (!(t.lifetime > 0.0)) throw DataError(where + ": lifetime must be > 0");
    if (!(t.build_time > 0.0)) throw DataError(where + ": build_time must be > 0");
    if (!(t.capacity_factor > 0.0) || t.capacity_factor > 1.0) {
        throw DataError(where + ": capacity_factor must be in (0,1]");
    }
    if (t.learning_exponent < 0.0) {
        throw DataError(where + ": learning_exponent must be >= 0");
    }
    if (!(t.cost_spread > 0.0)) throw DataError(where + ": cost_spread must be > 0");
    if (t.emission_factor < 0.0 && !t.allow_negative_emissions) {
        throw DataError(where +
                        ": negative emission_factor requires allow_negative_emissions");
    }
    if (t.initial_cumulative_capacity < 0.0) {
        throw DataError(where + ": initial_cumulative_capacity must be >= 0");
    }
    if (t.start_capacity_gw < 0.0) {
        throw DataError(where + ": start_capacity_gw must be >= 0");
    }
    for (double v : {t.invest_cost, t.fuel_cost, t.om_cost, t.emission_factor,
                     t.lifetime, t.build_time}) {
        if (!std::isfinite(v)) throw DataError(where + ": non-finite parameter");
    }
}

TechnologySpec parse_tech_row(const json& row, std::size_t index) {
    const std::string path = "technologies[" + std::to_string(index) + "]";
    detail::require_object<DataError>(row, path);
    detail::reject_unknown_keys<DataError>(
        row,
        {"id", "name", "invest_cost", "fuel_cost", "om_cost", "emission_factor",
         "lifetime", "build_time", "learning_exponent", "cost_spread",
         "capacity_factor", "grid_class", "resource_id",
         "initial_cumulative_capacity", "start_capacity_gw",
         "allow_negative_emissions"},
        path);

    TechnologySpec t;
    t.id = detail::require_string<DataError>(row, "id", path);
    t.name = detail::string_or<DataError>(row, "name", t.id, path);
    t.invest_cost = detail::require_number<DataError>(row, "invest_cost", path);
    t.fuel_cost = detail::require_number<DataError>(row, "fuel_cost", path);
    t.om_cost = detail::require_number<DataError>(row, "om_cost", path);
    t.emission_factor = detail::require_number<DataError>(row, "emission_factor", path);
    t.lifetime = detail::require_number<DataError>(row, "lifetime", path);
    t.build_time = detail::require_number<DataError>(row, "build_time", path);
    t.learning_exponent =
        detail::require_number<DataError>(row, "learning_exponent", path);
    t.cost_spread = detail::number_or<DataError>(row, "cost_spread", 0.1, path);
    t.capacity_factor = detail::require_number<DataError>(row, "capacity_factor", path);
    t.grid_class =
        grid_class_from_string(detail::require_string<DataError>(row, "grid_class", path));
    t.resource_id = detail::string_or<DataError>(row, "resource_id", "", path);
    t.start_capacity_gw =
        detail::number_or<DataError>(row, "start_capacity_gw", 0.0, path);
    // Young technologies: the learning base defaults to the current fleet.
    t.initial_cumulative_capacity = detail::number_or<DataError>(
        row, "initial_cumulative_capacity", t.start_capacity_gw, path);
    t.allow_negative_emissions =
        detail::bool_or<DataError>(row, "allow_negative_emissions", false, path);
    t.decommission_rate = 1.0 / t.lifetime;
    validate_spec(t);
    return t;
}

}  // namespace

GridClass grid_class_from_string(const std::string& s) {
    if (s == "base") return GridClass::Base;
    if (s == "flexible") return GridClass::Flexible;
    if (s == "variable") return GridClass::Variable;
    throw DataError("unknown grid_class '" + s + "'");
}

std::string to_string(GridClass c) {
    switch (c) {
        case GridClass::Base: return "base";
        case GridClass::Flexible: return "flexible";
        case GridClass::Variable: return "variable";
    }
    return "base";
}

std::size_t TechnologyRegistry::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < techs.size(); ++i) {
        if (techs[i].id == id) return i;
    }
    throw DataError("unknown technology id '" + id + "'");
}

bool TechnologyRegistry::contains(const std::string& id) const {
    for (const auto& t : techs) {
        if (t.id == id) return true;
    }
    return false;
}

void TechnologyRegistry::rebuild_index() {
    canonical_.resize(techs.size());
    for (std::size_t i = 0; i < techs.size(); ++i) canonical_[i] = i;
    std::sort(canonical_.begin(), canonical_.end(),
              [this](std::size_t a, std::size_t b) { return techs[a].id < techs[b].id; });
}

SpilloverMatrix SpilloverMatrix::identity(std::size_t n) {
    SpilloverMatrix m;
    m.n = n;
    m.weights.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

TechDataFile parse_tech_data(const std::string& document_text) {
    json doc = detail::parse_json<DataError>(document_text, "technology data");
    detail::require_object<DataError>(doc, "technology data");
    detail::reject_unknown_keys<DataError>(
        doc, {"format_version", "technologies", "spillover"}, "technology data");
    detail::check_format_version<DataError>(doc, kFormatVersion, "technology data");

    const json& rows = detail::require_key<DataError>(doc, "technologies", "technology data");
    if (!rows.is_array()) throw DataError("technologies: expected an array");
    if (rows.empty()) throw DataError("no technologies");

    TechDataFile file;
    std::unordered_map<std::string, bool> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        TechnologySpec t = parse_tech_row(rows[i], i);
        if (seen.count(t.id)) throw DataError("duplicate technology id '" + t.id + "'");
        seen[t.id] = true;
        file.registry.techs.push_back(std::move(t));
    }
    file.registry.rebuild_index();

    if (doc.contains("spillover")) {
        const json& sp = doc["spillover"];
        if (!sp.is_array()) throw DataError("spillover: expected an array");
        for (std::size_t i = 0; i < sp.size(); ++i) {
            const std::string path = "spillover[" + std::to_string(i) + "]";
            detail::require_object<DataError>(sp[i], path);
            detail::reject_unknown_keys<DataError>(sp[i], {"a", "b", "weight", "symmetric"},
                                                   path);
            SpilloverOverride o;
            o.tech_a = detail::require_string<DataError>(sp[i], "a", path);
            o.tech_b = detail::require_string<DataError>(sp[i], "b", path);
            o.weight = detail::require_number<DataError>(sp[i], "weight", path);
            o.symmetric = detail::bool_or<DataError>(sp[i], "symmetric", true, path);
            if (o.weight < 0.0 || o.weight > 1.0) {
                throw DataError(path + ": weight must be in [0,1]");
            }
            if (!file.registry.contains(o.tech_a) || !file.registry.contains(o.tech_b)) {
                throw DataError(path + ": unknown technology id");
            }
            file.spillover_overrides.push_back(std::move(o));
        }
    }
    return file;
}

TechDataFile load_tech_data(const std::string& path) {
    return parse_tech_data(detail::read_text_file(path));
}

std::string serialize_registry(const TechnologyRegistry& reg,
                               const std::vector<SpilloverOverride>& overrides) {
    json doc;
    doc["format_version"] = kFormatVersion;
    json rows = json::array();
    for (const auto& t : reg.techs) {
        json row;
        row["id"] = t.id;
        row["name"] = t.name;
        row["invest_cost"] = t.invest_cost;
        row["fuel_cost"] = t.fuel_cost;
        row["om_cost"] = t.om_cost;
        row["emission_factor"] = t.emission_factor;
        row["lifetime"] = t.lifetime;
        row["build_time"] = t.build_time;
        row["learning_exponent"] = t.learning_exponent;
        row["cost_spread"] = t.cost_spread;
        row["capacity_factor"] = t.capacity_factor;
        row["grid_class"] = to_string(t.grid_class);
        if (!t.resource_id.empty()) row["resource_id"] = t.resource_id;
        row["initial_cumulative_capacity"] = t.initial_cumulative_capacity;
        row["start_capacity_gw"] = t.start_capacity_gw;
        if (t.allow_negative_emissions) row["allow_negative_emissions"] = true;
        rows.push_back(std::move(row));
    }
    doc["technologies"] = std::move(rows);
    if (!overrides.empty()) {
        json sp = json::array();
        for (const auto& o : overrides) {
            json row;
            row["a"] = o.tech_a;
            row["b"] = o.tech_b;
            row["weight"] = o.weight;
            if (!o.symmetric) row["symmetric"] = false;
            sp.push_back(std::move(row));
        }
        doc["spillover"] = std::move(sp);
    }
    return doc.dump(2);
}

SpilloverMatrix default_spillover(const TechnologyRegistry& reg) {
    SpilloverMatrix m = SpilloverMatrix::identity(reg.size());
    const double w = 0.5;
    const std::pair<const char*, const char*> pairs[] = {
        {"igcc", "bigcc"},                   // coal and biomass gasification
        {"onshore_wind", "offshore_wind"},
        {"ccgt", "igcc"},
    };
    for (const auto& [a, b] : pairs) {
        if (!reg.contains(a) || !reg.contains(b)) continue;
        std::size_t i = reg.index_of(a);
        std::size_t j = reg.index_of(b);
        m.at(i, j) = w;
        m.at(j, i) = w;
    }
    return m;
}

void apply_spillover_overrides(SpilloverMatrix& m, const TechnologyRegistry& reg,
                               const std::vector<SpilloverOverride>& overrides) {
    for (const auto& o : overrides) {
        std::size_t i = reg.index_of(o.tech_a);
        std::size_t j = reg.index_of(o.tech_b);
        m.at(i, j) = o.weight;
        if (o.symmetric) m.at(j, i) = o.weight;
    }
}

namespace detail {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace detail

}  // namespace ftt

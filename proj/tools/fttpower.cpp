#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ftt/democases.hpp"
#include "ftt/errors.hpp"
#include "ftt/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ftt::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ftt::DataError("cannot write file '" + path + "'");
    out << text;
}

// --set KEY=VALUE with dotted key paths, applied onto the config document
// before validation. Values parse as JSON when possible, else as strings.
json apply_overrides(json doc, const std::vector<std::string>& overrides) {
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ftt::ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
        }
        const std::string key_path = kv.substr(0, eq);
        const std::string value_text = kv.substr(eq + 1);
        json value = json::parse(value_text, nullptr, false);
        if (value.is_discarded()) value = value_text;

        json* node = &doc;
        std::istringstream keys(key_path);
        std::string key, next;
        std::getline(keys, key, '.');
        while (std::getline(keys, next, '.')) {
            node = &(*node)[key];
            key = next;
        }
        (*node)[key] = std::move(value);
    }
    return doc;
}

ftt::ScenarioConfig load_config_with_overrides(const std::string& path,
                                               const std::vector<std::string>& overrides,
                                               std::uint64_t* seed_override) {
    json doc = json::parse(read_file(path), nullptr, false);
    if (doc.is_discarded()) throw ftt::ConfigError("config '" + path + "': not valid JSON");
    doc = apply_overrides(std::move(doc), overrides);
    if (seed_override) doc["seed"] = *seed_override;
    return ftt::parse_config(doc.dump());
}

std::string resolve_data_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("FTT_DATA_DIR"); env && *env) return env;
    return "data";
}

void progress_line(const ftt::StepRecord& rec, const std::vector<std::string>& ids,
                   double* last_decade) {
    const double decade = std::floor(rec.year / 10.0) * 10.0;
    if (*last_decade == decade) return;
    *last_decade = decade;
    std::size_t top = 0;
    for (std::size_t i = 1; i < rec.shares.size(); ++i) {
        if (rec.shares[i] > rec.shares[top]) top = i;
    }
    std::fprintf(stderr, "%.0f  top=%s %.1f%%  emissions=%.2f GtCO2/y  avg_lcoe=%.1f $/MWh\n",
                 rec.year, ids[top].c_str(), 100.0 * rec.shares[top],
                 rec.emissions_rate * 1e-9, rec.avg_lcoe);
}

int cmd_run(const std::string& config_path, const std::string& data_flag,
            const std::string& out_dir, const std::vector<std::string>& overrides,
            bool has_seed, std::uint64_t seed) {
    ftt::ScenarioConfig config =
        load_config_with_overrides(config_path, overrides, has_seed ? &seed : nullptr);
    ftt::ModelData data = ftt::load_model_data(resolve_data_dir(data_flag));
    fs::create_directories(out_dir);

    std::vector<std::string> ids;
    for (const auto& t : data.registry.techs) ids.push_back(t.id);
    double last_decade = -1e300;
    ftt::SimulationOutput out = ftt::run(config, data, [&](const ftt::StepRecord& rec) {
        progress_line(rec, ids, &last_decade);
    });

    ftt::write_series_csv(out, out_dir + "/series.csv");
    ftt::write_summary_json(out, config, out_dir + "/summary.json");
    if (out.halted_early) {
        std::fprintf(stderr, "error: run halted early: %s (partial output in %s)\n",
                     out.diagnostic.c_str(), out_dir.c_str());
        return kExitRuntime;
    }
    return 0;
}

int cmd_ensemble(const std::string& config_path, const std::string& data_flag,
                 const std::string& out_dir, const std::vector<std::string>& overrides,
                 int samples, bool has_seed, std::uint64_t seed) {
    ftt::ScenarioConfig config =
        load_config_with_overrides(config_path, overrides, has_seed ? &seed : nullptr);
    ftt::ModelData data = ftt::load_model_data(resolve_data_dir(data_flag));
    fs::create_directories(out_dir);

    ftt::EnsembleSummary summary = ftt::run_ensemble(config, data, samples);
    ftt::write_ensemble_json(summary, config, out_dir + "/ensemble.json");
    std::fprintf(stderr, "%d members, %d failures\n", summary.members, summary.failures);
    return 0;
}

int cmd_examples(const std::string& out_dir) {
    fs::create_directories(out_dir);
    const std::pair<ftt::DemoCase, const char*> cases[] = {
        {ftt::DemoCase::A, "examples_a.csv"},
        {ftt::DemoCase::B, "examples_b.csv"},
        {ftt::DemoCase::C, "examples_c.csv"},
        {ftt::DemoCase::D, "examples_d.csv"},
    };
    for (const auto& [which, name] : cases) {
        const ftt::DemoTrajectory traj = ftt::run_demo_case(which);
        write_file(out_dir + "/" + name, ftt::demo_case_csv(traj));
    }
    return 0;
}

struct SeriesTable {
    std::vector<std::string> header;
    // key: (year string, tech id) in file order
    std::vector<std::pair<std::string, std::string>> keys;
    std::vector<std::vector<double>> values;  // numeric columns per row
};

SeriesTable read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ftt::DataError("cannot open series file '" + path + "'");
    SeriesTable t;
    std::string line;
    if (!std::getline(in, line)) throw ftt::DataError("empty series file '" + path + "'");
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != t.header.size()) {
            throw ftt::DataError("malformed row in '" + path + "'");
        }
        t.keys.emplace_back(cells[0], cells[1]);
        std::vector<double> row;
        for (std::size_t i = 2; i < cells.size(); ++i) row.push_back(std::stod(cells[i]));
        row.insert(row.begin(), std::stod(cells[0]));
        t.values.push_back(std::move(row));
    }
    return t;
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b,
                const std::string& out_dir) {
    const SeriesTable a = read_series(dir_a + "/series.csv");
    const SeriesTable b = read_series(dir_b + "/series.csv");
    if (a.keys != b.keys) {
        throw ftt::ConfigError("outputs do not share a time axis and technology set");
    }
    fs::create_directories(out_dir);

    // Per-row differences (b - a) for every numeric column.
    std::string diff =
        "year,tech_id,d_share,d_capacity_GW,d_generation_GWh,d_investment,d_lcoe,"
        "d_emissions_rate\n";
    char buf[64];
    for (std::size_t r = 0; r < a.keys.size(); ++r) {
        diff += a.keys[r].first;
        diff += ',';
        diff += a.keys[r].second;
        for (std::size_t c = 1; c < a.values[r].size(); ++c) {
            std::snprintf(buf, sizeof(buf), ",%.17g", b.values[r][c] - a.values[r][c]);
            diff += buf;
        }
        diff += '\n';
    }
    write_file(out_dir + "/diff.csv", diff);

    // Peak generation year per technology in each run.
    std::map<std::string, std::pair<double, double>> peak_a, peak_b;  // id -> (gen, year)
    double total_a = 0.0, total_b = 0.0;
    for (std::size_t r = 0; r < a.keys.size(); ++r) {
        const std::string& id = a.keys[r].second;
        const double year = a.values[r][0];
        const double gen_a = a.values[r][3];
        const double gen_b = b.values[r][3];
        if (!peak_a.count(id) || gen_a > peak_a[id].first) peak_a[id] = {gen_a, year};
        if (!peak_b.count(id) || gen_b > peak_b[id].first) peak_b[id] = {gen_b, year};
        total_a += a.values[r][6];
        total_b += b.values[r][6];
    }
    std::string summary = "peak generation years (A vs B)\n";
    for (const auto& [id, pa] : peak_a) {
        std::snprintf(buf, sizeof(buf), "  %-22s %8.2f  %8.2f\n", id.c_str(), pa.second,
                      peak_b[id].second);
        summary += buf;
    }
    std::snprintf(buf, sizeof(buf), "emissions rate sum delta (B-A): %.6g t/y\n",
                  total_b - total_a);
    summary += buf;
    write_file(out_dir + "/compare_summary.txt", summary);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Power sector technology transition simulator"};
    app.require_subcommand(1);

    std::string config_path, data_dir, out_dir = "out";
    std::vector<std::string> overrides;
    int samples = 100;
    std::uint64_t seed = 0;
    bool has_seed = false;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config) {
            cmd->add_option("--config", config_path, "scenario config file")->required();
            cmd->add_option("--data", data_dir, "data directory (fallback: FTT_DATA_DIR)");
            cmd->add_option("--set", overrides, "override config values, KEY=VALUE");
            cmd->add_option_function<std::uint64_t>(
                   "--seed", [&](std::uint64_t v) { seed = v; has_seed = true; },
                   "override the config seed");
        }
        cmd->add_option("--out", out_dir, "output directory");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run one scenario");
    add_common(run_cmd, true);
    CLI::App* ens_cmd = app.add_subcommand("ensemble", "run a Monte-Carlo ensemble");
    add_common(ens_cmd, true);
    ens_cmd->add_option("--samples", samples, "ensemble size")->check(CLI::PositiveNumber);
    CLI::App* ex_cmd = app.add_subcommand("examples", "four-technology demonstration runs");
    add_common(ex_cmd, false);
    CLI::App* cmp_cmd = app.add_subcommand("compare", "difference two run outputs");
    std::string dir_a, dir_b;
    cmp_cmd->add_option("dir_a", dir_a, "first output directory")->required();
    cmp_cmd->add_option("dir_b", dir_b, "second output directory")->required();
    add_common(cmp_cmd, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(config_path, data_dir, out_dir, overrides, has_seed, seed);
        }
        if (ens_cmd->parsed()) {
            return cmd_ensemble(config_path, data_dir, out_dir, overrides, samples,
                                has_seed, seed);
        }
        if (ex_cmd->parsed()) return cmd_examples(out_dir);
        if (cmp_cmd->parsed()) return cmd_compare(dir_a, dir_b, out_dir);
    } catch (const ftt::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const ftt::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return 0;
}

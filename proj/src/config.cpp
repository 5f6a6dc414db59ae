#include "spingp/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace spingp {

namespace {

using json = nlohmann::ordered_json;

const std::set<std::string> kScenarios = {"rabi",  "gp_run",           "scattering_sweep",
                                          "convergence_trend", "lemma_suite",
                                          "protocol_demo"};
const std::set<std::string> kSuites = {"lemma31", "lemma32", "lemma33", "lemma41",
                                       "lemma51"};

}  // namespace

void ExperimentConfig::validate() const {
    if (schema_version != 1)
        throw std::invalid_argument("config: unsupported schema_version " +
                                    std::to_string(schema_version));
    if (!kScenarios.count(scenario))
        throw std::invalid_argument("config: unknown scenario '" + scenario + "'");
    if (scenario == "lemma_suite" && !kSuites.count(suite))
        throw std::invalid_argument("config: unknown suite '" + suite + "'");
    if (grid_dim < 1 || grid_dim > 3)
        throw std::invalid_argument("config: grid_dim must be 1, 2 or 3");
    if (grid_points < 2 || (grid_points & (grid_points - 1)) != 0)
        throw std::invalid_argument("config: grid_points must be a power of two");
    if (!(box_length > 0.0)) throw std::invalid_argument("config: box_length must be positive");
    if (!(dt > 0.0) || !(t_end > 0.0) || dt > t_end)
        throw std::invalid_argument("config: need 0 < dt <= t_end");
    if (scattering_length_a < 0.0)
        throw std::invalid_argument("config: scattering length must be nonnegative");
    if (well_depth < 0.0)
        throw std::invalid_argument("config: interaction well depth must be nonnegative "
                                    "(repulsive two-body potential)");
    if (!(well_radius > 0.0))
        throw std::invalid_argument("config: interaction support radius must be positive");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("config: beta must lie in (0, 1)");
    if (sites < 2 || sites > 8) throw std::invalid_argument("config: sites must be in [2, 8]");
    if (!(hopping > 0.0)) throw std::invalid_argument("config: hopping must be positive");
    for (double v : pair_v)
        if (v < 0.0) throw std::invalid_argument("config: pair potential values must be nonnegative");
    if (scaling_mode != "mean_field" && scaling_mode != "gross_pitaevskii")
        throw std::invalid_argument("config: scaling_mode must be mean_field or gross_pitaevskii");
    if (!(xi > 0.0 && xi < 0.5))
        throw std::invalid_argument("config: xi must lie in (0, 0.5)");
    for (int n : n_list)
        if (n < 1) throw std::invalid_argument("config: n_list entries must be positive");
    if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    j["schema_version"] = schema_version;
    j["scenario"] = scenario;
    j["seed"] = seed;
    j["out_dir"] = out_dir;
    j["threads"] = threads;
    j["grid_dim"] = grid_dim;
    j["grid_points"] = grid_points;
    j["box_length"] = box_length;
    j["dt"] = dt;
    j["t_end"] = t_end;
    j["scattering_length_a"] = scattering_length_a;
    j["omega_rabi"] = omega_rabi;
    j["omega_drive"] = omega_drive;
    j["trap_omega_up"] = trap_omega_up;
    j["trap_omega_down"] = trap_omega_down;
    j["well_depth"] = well_depth;
    j["well_radius"] = well_radius;
    j["beta"] = beta;
    j["n_list"] = n_list;
    j["sites"] = sites;
    j["hopping"] = hopping;
    j["pair_v"] = pair_v;
    j["scaling_mode"] = scaling_mode;
    j["xi"] = xi;
    j["suite"] = suite;
    return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: JSON parse failure: ") + e.what());
    }
    ExperimentConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("schema_version", c.schema_version);
    get("scenario", c.scenario);
    get("seed", c.seed);
    get("out_dir", c.out_dir);
    get("threads", c.threads);
    get("grid_dim", c.grid_dim);
    get("grid_points", c.grid_points);
    get("box_length", c.box_length);
    get("dt", c.dt);
    get("t_end", c.t_end);
    get("scattering_length_a", c.scattering_length_a);
    get("omega_rabi", c.omega_rabi);
    get("omega_drive", c.omega_drive);
    get("trap_omega_up", c.trap_omega_up);
    get("trap_omega_down", c.trap_omega_down);
    get("well_depth", c.well_depth);
    get("well_radius", c.well_radius);
    get("beta", c.beta);
    get("n_list", c.n_list);
    get("sites", c.sites);
    get("hopping", c.hopping);
    get("pair_v", c.pair_v);
    get("scaling_mode", c.scaling_mode);
    get("xi", c.xi);
    get("suite", c.suite);
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

void ExperimentConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("config: cannot write " + path);
    out << to_json_text();
}

}  // namespace spingp

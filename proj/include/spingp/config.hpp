#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spingp {

/// Scenario-driven experiment description, loaded from a versioned JSON
/// file. All fields are serialized on save, so parse -> serialize -> parse
/// is the identity.
struct ExperimentConfig {
    int schema_version = 1;
    std::string scenario = "rabi";  // rabi | gp_run | scattering_sweep |
                                    // convergence_trend | lemma_suite | protocol_demo
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    int threads = 1;

    // grid / dynamics
    int grid_dim = 1;
    int grid_points = 64;
    double box_length = 16.0;
    double dt = 1e-3;
    double t_end = 1.0;
    double scattering_length_a = 0.0;
    double omega_rabi = 1.0;
    double omega_drive = 1.0;
    double trap_omega_up = 0.0;
    double trap_omega_down = 0.0;

    // two-body potential / shell construction
    double well_depth = 8.0;     // V0 >= 0 (assumption shape: nonneg V)
    double well_radius = 1.0;    // compact support radius
    double beta = 0.4;
    std::vector<int> n_list;     // particle-number sweep

    // many-body lattice
    int sites = 4;
    double hopping = 1.0;
    std::vector<double> pair_v;  // V by ring separation, index 0 = on-site
    std::string scaling_mode = "mean_field";  // or "gross_pitaevskii"
    double xi = 0.1;

    // lemma_suite
    std::string suite = "lemma31";

    void validate() const;
    std::string to_json_text() const;
    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    void save(const std::string& path) const;

    bool operator==(const ExperimentConfig&) const = default;
};

}  // namespace spingp
